#include "hazard/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hazard {

Estimate sample_mean(std::span<const double> values)
{
    Estimate e;
    e.n = values.size();
    if (values.empty())
        return e;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    e.mean = sum / static_cast<double>(e.n);
    if (e.n < 2)
        return e;
    double ss = 0.0;
    for (double v : values)
        ss += (v - e.mean) * (v - e.mean);
    e.se = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
    return e;
}

Estimate batch_means(std::span<const double> values, std::size_t batches)
{
    const std::size_t n = values.size();
    if (batches < 2 || n < 2 * batches)
        return sample_mean(values);
    std::vector<double> means(batches);
    double total = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t begin = n * b / batches;
        const std::size_t end = n * (b + 1) / batches;
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i)
            sum += values[i];
        total += sum;
        means[b] = sum / static_cast<double>(end - begin);
    }
    Estimate e;
    e.n = n;
    e.mean = total / static_cast<double>(n);
    // batches differ in size by at most one element; weight them equally
    double grand = 0.0;
    for (double m : means)
        grand += m;
    grand /= static_cast<double>(batches);
    double ss = 0.0;
    for (double m : means)
        ss += (m - grand) * (m - grand);
    e.se = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
    return e;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    if (sample.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sample.size()) {
        // advance over ties so the empirical CDF jumps once per distinct value
        std::size_t j = i;
        while (j + 1 < sample.size() && sample[j + 1] == sample[i])
            ++j;
        const double f = cdf(sample[i]);
        const double below = static_cast<double>(i) / n;
        const double at = static_cast<double>(j + 1) / n;
        d = std::max({d, std::abs(f - below), std::abs(at - f)});
        i = j + 1;
    }
    return d;
}

double ks_critical_1pct(std::size_t n)
{
    return 1.62762 / std::sqrt(static_cast<double>(n));
}

Check two_sided_check(std::string name, const Estimate& e, double k, double floor)
{
    Check c;
    c.name = std::move(name);
    c.statistic = e.mean;
    c.se = e.se;
    c.threshold = k * e.se + floor;
    c.passed = std::abs(e.mean) <= c.threshold;
    c.n = e.n;
    c.sidedness = Sidedness::two_sided;
    return c;
}

Check one_sided_check(std::string name, const Estimate& e, Sidedness side, double k)
{
    Check c;
    c.name = std::move(name);
    c.statistic = e.mean;
    c.se = e.se;
    c.threshold = k * e.se;
    c.n = e.n;
    c.sidedness = side;
    if (side == Sidedness::greater)
        c.passed = e.mean > c.threshold;
    else if (side == Sidedness::less)
        c.passed = e.mean < -c.threshold;
    else
        c.passed = std::abs(e.mean) <= c.threshold;
    return c;
}

bool all_passed(std::span<const Check> checks) noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace hazard
