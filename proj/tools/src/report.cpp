#include "hazard/cli/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace hazard::cli {

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_paths_csv(std::ostream& out, std::span<const PathRow> rows)
{
    out << kPathsHeader << '\n';
    for (const PathRow& row : rows) {
        out << row.path_id << ',' << format_double(row.t) << ',' << format_double(row.w) << ','
            << format_double(row.c) << ',' << format_double(row.envelope_lo) << ','
            << format_double(row.envelope_hi) << ',' << format_double(row.g) << ',' << row.regime << '\n';
    }
}

void write_values_csv(std::ostream& out, std::span<const ValueRow> rows)
{
    out << kValuesHeader << '\n';
    for (const ValueRow& row : rows)
        out << row.strategy << ',' << row.path_id << ',' << format_double(row.t) << ','
            << format_double(row.value) << '\n';
}

std::string report_json(std::span<const std::string> suites, std::span<const Check> checks)
{
    using nlohmann::ordered_json;
    auto number = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };

    ordered_json doc;
    doc["suites"] = ordered_json::array();
    for (const auto& s : suites)
        doc["suites"].push_back(s);
    doc["passed"] = all_passed(checks);
    doc["checks"] = ordered_json::array();
    for (const Check& c : checks) {
        ordered_json rec;
        rec["name"] = c.name;
        rec["statistic"] = number(c.statistic);
        rec["se"] = number(c.se);
        rec["threshold"] = number(c.threshold);
        rec["verdict"] = c.passed ? "pass" : "fail";
        doc["checks"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

}  // namespace hazard::cli
