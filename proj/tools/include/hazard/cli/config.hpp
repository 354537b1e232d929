#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hazard/model.hpp"

namespace hazard::cli {

/// Bad config file, bad flag value or failed validation. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command needs besides its own flags.
struct RunConfig {
    ModelParams params = ModelParams::reference();
    std::size_t steps = 2000;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 7;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
/// Keys are r, T, sigma, s0, lambda_plus, lambda_minus, steps, n_paths and
/// seed; missing keys keep their defaults, unknown or repeated keys throw.
RunConfig parse_config(std::string_view text);

RunConfig read_config_file(const std::filesystem::path& path);

/// Throws ConfigError unless the model parameters are valid, steps >= 10
/// and n_paths >= 100.
void validate_config(const RunConfig& cfg);

/// All nine keys, one per line, doubles at 17 significant digits so that
/// parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

/// Unsigned integer flag or config value; throws ConfigError naming `key`.
std::uint64_t parse_unsigned(std::string_view key, std::string_view value);
double parse_double(std::string_view key, std::string_view value);

}  // namespace hazard::cli
