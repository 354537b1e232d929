#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hazard/stats.hpp"

namespace hazard::cli {

/// 17 significant digits: a double written and read back is bit-identical.
std::string format_double(double x);

inline constexpr const char* kPathsHeader = "path_id,t,w,c,envelope_lo,envelope_hi,g,regime";
inline constexpr const char* kValuesHeader = "strategy,path_id,t,value";

/// One grid node of an exported sample path.
struct PathRow {
    std::size_t path_id = 0;
    double t = 0.0;
    double w = 0.0;
    double c = 0.0;
    double envelope_lo = 0.0;
    double envelope_hi = 0.0;
    double g = 0.0;
    /// "plus" where W(t) >= 0, otherwise "minus".
    std::string regime;
};

void write_paths_csv(std::ostream& out, std::span<const PathRow> rows);

struct ValueRow {
    std::string strategy;
    std::size_t path_id = 0;
    double t = 0.0;
    double value = 0.0;
};

void write_values_csv(std::ostream& out, std::span<const ValueRow> rows);

/// JSON document {"suites": [...], "passed": bool, "checks": [{name,
/// statistic, se, threshold, verdict}, ...]}. Non-finite numbers become
/// null. Output depends only on the arguments.
std::string report_json(std::span<const std::string> suites, std::span<const Check> checks);

}  // namespace hazard::cli
