#include "hazard/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hazard/cli/report.hpp"

namespace hazard::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::uint64_t parse_unsigned(std::string_view key, std::string_view value)
{
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    return out;
}

double parse_double(std::string_view key, std::string_view value)
{
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    return out;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.emplace(key).second)
            throw ConfigError("line " + std::to_string(line_no) + ": repeated key " + std::string(key));

        if (key == "r")
            cfg.params.r = parse_double(key, value);
        else if (key == "T")
            cfg.params.T = parse_double(key, value);
        else if (key == "sigma")
            cfg.params.sigma = parse_double(key, value);
        else if (key == "s0")
            cfg.params.s0 = parse_double(key, value);
        else if (key == "lambda_plus")
            cfg.params.lambda_plus = parse_double(key, value);
        else if (key == "lambda_minus")
            cfg.params.lambda_minus = parse_double(key, value);
        else if (key == "steps")
            cfg.steps = parse_unsigned(key, value);
        else if (key == "n_paths")
            cfg.n_paths = parse_unsigned(key, value);
        else if (key == "seed")
            cfg.seed = parse_unsigned(key, value);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + std::string(key));
    }
    return cfg;
}

RunConfig read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const RunConfig& cfg)
{
    try {
        validate_params(cfg.params);
    } catch (const ParamError& e) {
        throw ConfigError(std::string("invalid model parameter: ") + e.what());
    }
    if (cfg.steps < 10)
        throw ConfigError("steps must be at least 10");
    if (cfg.n_paths < 100)
        throw ConfigError("n_paths must be at least 100");
}

std::string echo_config(const RunConfig& cfg)
{
    std::string out;
    auto put = [&](const char* key, const std::string& value) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    put("r", format_double(cfg.params.r));
    put("T", format_double(cfg.params.T));
    put("sigma", format_double(cfg.params.sigma));
    put("s0", format_double(cfg.params.s0));
    put("lambda_plus", format_double(cfg.params.lambda_plus));
    put("lambda_minus", format_double(cfg.params.lambda_minus));
    put("steps", std::to_string(cfg.steps));
    put("n_paths", std::to_string(cfg.n_paths));
    put("seed", std::to_string(cfg.seed));
    return out;
}

}  // namespace hazard::cli
