#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hazard/model.hpp"
#include "hazard/parallel.hpp"
#include "hazard/stats.hpp"

namespace hazard {

/// Markets that violate one of the no-arbitrage conditions, each paired with
/// the strategy that exploits it. `none` runs the same strategies against
/// the model itself.
enum class BrokenModel { none, decreasing_c, postdefault_value, range_violation };

std::optional<BrokenModel> parse_broken_model(std::string_view name);
std::string to_string(BrokenModel m);

/// Broken markets are built on a constant-hazard base with r = 0, so the
/// events on which the strategies gain have closed-form probabilities.
/// The hazard is the mean of lambda_plus and lambda_minus.
ModelParams broken_base(const ModelParams& p);

struct DemoSetup {
    ModelParams params{};
    std::size_t steps = 2000;
    std::size_t n = 10000;
    std::uint64_t seed = 7;
    Parallelism parallel{};
    /// Size of the injected post-default price.
    double epsilon = 0.05;
    /// Number of value paths kept for export.
    std::size_t record = 8;
};

struct DemoOutcome {
    std::string strategy;
    std::string description;
    std::size_t n = 0;
    double max_abs_initial = 0.0;
    double min_terminal = 0.0;
    Estimate terminal;
    double fraction_positive = 0.0;
    /// Probability of the event on which the strategy gains (0 for an
    /// unbroken market).
    double expected_fraction = 0.0;
    double expected_mean = 0.0;
    std::vector<double> record_times;
    std::vector<std::vector<double>> record_values;
};

/// Strategy times, event probabilities and pricing for each broken market:
///  decreasing_c: c(t1) = 0.9 falling to c(t2) = 0.8 with t1 = T/4 and
///    t2 = 3T/4; the theorem arbitrage gains on {t1 < tau}.
///  postdefault_value: D(t) carries +epsilon after default at t = T/2; the
///    post-default detector gains on {tau <= t}.
///  range_violation: c(t) = 1.2 on {W(t) > 1} at t = T/2; the range
///    detector gains on {W(t) > 1, t < tau}.
std::vector<DemoOutcome> run_demo(BrokenModel model, const DemoSetup& setup);

}  // namespace hazard
