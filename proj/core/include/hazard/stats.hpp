#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hazard {

/// Sample mean with its standard error.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// Mean and classical standard error sd/sqrt(n).
Estimate sample_mean(std::span<const double> values);

/// Mean with a batch-means standard error: the sample is cut into `batches`
/// contiguous batches (in stream order) and the SE is that of the batch means.
/// Falls back to the classical SE when there are fewer than 2 values per batch.
Estimate batch_means(std::span<const double> values, std::size_t batches = 50);

/// sup_x |F_n(x) - F(x)| for the empirical distribution of `sample`.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value of the one-sample Kolmogorov-Smirnov statistic.
double ks_critical_1pct(std::size_t n);

/// How a statistic is compared with its threshold.
enum class Sidedness { two_sided, greater, less };

/// One pass/fail record of a verification run.
struct Check {
    std::string name;
    double statistic = 0.0;
    double se = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::size_t n = 0;
    Sidedness sidedness = Sidedness::two_sided;
};

/// Two-sided check |statistic| <= k se + floor.
Check two_sided_check(std::string name, const Estimate& e, double k = 4.0, double floor = 1e-12);

/// One-sided check statistic > k se (Sidedness::greater) or
/// statistic < -k se (Sidedness::less). A zero-variance zero statistic fails.
Check one_sided_check(std::string name, const Estimate& e, Sidedness side, double k = 2.0);

bool all_passed(std::span<const Check> checks) noexcept;

}  // namespace hazard
