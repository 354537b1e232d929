#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hazard/scenario.hpp"
#include "hazard/stats.hpp"

namespace hazard {

/// {W(z_1) in [lo_1, hi_1], ..., W(z_n) in [lo_n, hi_n]}, optionally
/// intersected with {s < tau}. Bounds may be infinite.
struct CylinderEvent {
    std::string name;
    std::vector<double> times;
    std::vector<std::pair<double, double>> boxes;
    std::optional<double> survives_past;

    static CylinderEvent full_space();
    /// Throws DomainError unless times are increasing in [0, T] and every box
    /// has lo < hi.
    void validate(double horizon) const;
    /// Brownian part only; the default condition is checked separately.
    bool contains_path(const Scenario& sc) const;
    bool contains(const Scenario& sc) const;
    /// Latest time the event depends on (0 for the full space).
    double last_time() const;
};

/// Q_BS probability of the Brownian part of `ev` by nested Gauss-Legendre
/// integration over Gaussian transition densities. At most 3 times.
double cylinder_probability(const CylinderEvent& ev, std::size_t nodes = 160);

struct TestReport {
    std::vector<Check> checks;

    bool passed() const noexcept { return all_passed(checks); }
    void append(const TestReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

/// Q(A, s < tau <= t) against E[1_A (G(s) - G(t))], and Q(A, T < tau)
/// against E[1_A G(T)], as paired differences at 4 SE.
TestReport verify_q_identity(const CylinderEvent& ev, double s, double t, const SimulationSetup& setup);

/// Q(A) assembled from the default-time partition {0 < tau <= T} u {T < tau}
/// against the Brownian probability Q_BS(A): the quadrature oracle for
/// events on at most three times, otherwise an independent Brownian-only
/// simulation. Also checks G(0) = 1 on every scenario.
TestReport verify_restriction(const CylinderEvent& ev, const SimulationSetup& setup);

/// Scenarios ranked by G(t) and cut into equal-count buckets; in each bucket
/// the survival frequency of {t < tau} is compared with the mean of G(t).
TestReport verify_conditional_survival(double t, const SimulationSetup& setup, std::size_t buckets = 10);

enum class MartingaleProcess {
    /// e^{-rt} S(t) under Q.
    discounted_stock,
    /// e^{-rt} D(t, T) under Q.
    discounted_bond,
    /// e^{-rt} c(t) G(t) under Q_BS.
    discounted_cg,
    /// S(t) without discounting; a negative control.
    undiscounted_stock,
};

std::string to_string(MartingaleProcess m);

/// For each process and event E (depending on the path up to t1 and, except
/// for cG, on {s < tau} with s <= t1): E[1_E (X(t2) - X(t1))] = 0 at 4 SE.
/// All processes share one pass over the scenarios.
TestReport verify_martingale(std::span<const MartingaleProcess> processes, double t1, double t2,
                             std::span<const CylinderEvent> events, const SimulationSetup& setup);

/// A fixed family of 24 test events on grid times <= t1 (sign and band
/// events on W at t1 and at earlier nodes). With `with_default` the family
/// also contains each of them intersected with {s < tau} for s = t1 or an
/// earlier node, 48 events in all.
std::vector<CylinderEvent> standard_events(const TimeGrid& grid, double t1, bool with_default);

/// A check that passes exactly when `control` fails: negative controls must
/// be detected for the suite to have power.
Check expect_failure(std::string name, const TestReport& control);

/// For each (t1, t2) and each W(t1)-ranked bucket: the bucket mean of
/// e^{-r t2} c(t2) - e^{-r t1} c(t1) exceeds 0 by more than 2 SE, and the
/// bucket mean of G(t2) - G(t1) is below 0 by more than 2 SE. c comes from
/// setup.pre_default (the closed form when empty).
TestReport verify_strict_submartingale(std::span<const std::pair<double, double>> pairs,
                                       const SimulationSetup& setup, std::size_t buckets = 10);

/// Bucket assignment by rank: item k goes to floor(rank_k * buckets / n),
/// with ties broken by index.
std::vector<std::size_t> rank_buckets(std::span<const double> keys, std::size_t buckets);

}  // namespace hazard
