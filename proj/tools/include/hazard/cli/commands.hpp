#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hazard/cli/config.hpp"
#include "hazard/cli/report.hpp"
#include "hazard/demo.hpp"
#include "hazard/pricing.hpp"
#include "hazard/stats.hpp"
#include "hazard/verify.hpp"

namespace hazard::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailed = 1,
    kExitUsage = 2,
    kExitIo = 3,
};

struct PriceReport {
    double closed_form = 0.0;
    Estimate monte_carlo;
    double delta = 0.0;
    bool consistent = false;
};

/// Closed-form D(0, T) against the simulated mean of e^{-rT} 1{T < tau}
/// over cfg.n_paths scenarios; consistent when |delta| <= 3 SE.
PriceReport price_report(const RunConfig& cfg);

int cmd_price(const RunConfig& cfg, std::ostream& out);

/// Scenarios 0..count-1 of the configured batch, every grid node.
std::vector<PathRow> sample_paths(const RunConfig& cfg, std::size_t count);

int cmd_paths(const RunConfig& cfg, std::size_t count, const std::filesystem::path& out_path,
              std::ostream& out, std::ostream& err);

/// martingales, submartingale, identities, decomposition, detectors, nqsa.
const std::vector<std::string>& suite_names();

/// Comma-separated suite names, or "all" (also the meaning of an empty list).
/// Throws ConfigError for an unknown name. The result follows the order of
/// suite_names().
std::vector<std::string> parse_suites(std::string_view list);

/// Pre-default value that depends on t only, from `t,c` lines (blank lines
/// and `#` comments skipped), interpolated linearly in t and held constant
/// outside the table. Throws ConfigError for malformed input or times that
/// do not increase.
PreDefaultFn parse_candidate(std::string_view text);
PreDefaultFn read_candidate(const std::filesystem::path& path);

/// Runs one suite. An empty candidate means the model's closed form.
TestReport run_suite(const std::string& suite, const RunConfig& cfg, const PreDefaultFn& candidate = {});

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites, const PreDefaultFn& candidate,
               const std::filesystem::path& out_path, std::ostream& out, std::ostream& err);

/// Strategy value paths of the recorded scenarios of every outcome.
std::vector<ValueRow> value_rows(const std::vector<DemoOutcome>& outcomes);

int cmd_demo(const RunConfig& cfg, BrokenModel broken, const std::filesystem::path& out_path,
             std::ostream& out, std::ostream& err);

}  // namespace hazard::cli
