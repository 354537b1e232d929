#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hazard/model.hpp"
#include "hazard/pricing.hpp"
#include "hazard/stats.hpp"

namespace hazard {

enum class LatticeKind {
    /// Binomial lattice, node (i, j) at level (2j - i) sqrt(dt), j = 0..i.
    recombining,
    /// Full binary tree, node (i, j) for j < 2^i; bit k of j is move k+1.
    tree,
};

/// Discrete stand-in for the Brownian filtration on [0, T]: moves of
/// +-sqrt(dt) with probability 1/2 each.
class Lattice {
public:
    static Lattice recombining(double horizon, std::size_t steps, double rate = 0.0);
    /// Non-recombining tree; steps must be <= 20.
    static Lattice tree(double horizon, std::size_t steps, double rate = 0.0);

    LatticeKind kind() const noexcept { return kind_; }
    std::size_t steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return horizon_; }
    /// Discount rate applied inside the decomposition (e^{-r t} c).
    double rate() const noexcept { return rate_; }

    std::size_t width(std::size_t i) const noexcept;
    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return offsets_[i] + j; }
    double time(std::size_t i) const noexcept;
    double level(std::size_t i, std::size_t j) const noexcept;
    /// Position at step i+1 reached by an up (down) move from (i, j).
    std::size_t up(std::size_t i, std::size_t j) const noexcept;
    std::size_t down(std::size_t i, std::size_t j) const noexcept;

    static constexpr double p_up = 0.5;

private:
    Lattice(LatticeKind kind, double horizon, std::size_t steps, double rate);

    LatticeKind kind_;
    double horizon_;
    std::size_t steps_;
    double dt_;
    double rate_;
    std::vector<std::size_t> offsets_;
};

/// One value per lattice node, addressed as (step, position).
struct LatticeProcess {
    std::vector<double> values;
    bool adapted = true;

    LatticeProcess() = default;
    explicit LatticeProcess(const Lattice& lat, double fill = 0.0) : values(lat.size(), fill) {}

    double& at(const Lattice& lat, std::size_t i, std::size_t j) { return values[lat.index(i, j)]; }
    double at(const Lattice& lat, std::size_t i, std::size_t j) const { return values[lat.index(i, j)]; }
};

/// Samples f(t_i, level) at every node.
LatticeProcess sample_on_lattice(const Lattice& lat, const PreDefaultFn& f);

/// Recombining lattice over [0, T] discounting at p.r, with c(t_i, w) from
/// the closed form at every node and c = 1 on the terminal layer.
std::pair<Lattice, LatticeProcess> lattice_from_model(const ModelParams& p, std::size_t steps);

/// c priced on the lattice itself by backward induction: c = 1 at T and
/// c(i, j) = exp(-(r + lambda(level)) dt) (c_up + c_down) / 2, with
/// lambda = lambda_plus at levels >= 0. Converges to the closed form as
/// steps grow; exact under constant hazard.
std::pair<Lattice, LatticeProcess> lattice_backward_values(const ModelParams& p, std::size_t steps);

/// Multiplicative decomposition e^{-rt} c = M / G with G previsible,
/// G(0) = 1 and M a martingale.
///
/// The one-step factor G(t_{i+1})/G(t_i) = e^{-rt_i} c / E[e^{-rt_{i+1}} c_next]
/// depends only on the step-i node, so it is stored there (`step_factor`).
/// On a tree every node has a unique history, and G and M are also returned
/// as node processes; on a recombining lattice G is a path functional and
/// only the factors are meaningful.
struct Decomposition {
    LatticeProcess step_factor;
    LatticeProcess discounted;
    std::optional<LatticeProcess> survival;
    std::optional<LatticeProcess> martingale;
};

/// Throws DomainError for a non-positive c value.
Decomposition multiplicative_decompose(const Lattice& lat, const LatticeProcess& c);

/// Same result, with node factors evaluated in the given order (a permutation
/// of node indices below the terminal layer). Used to check order-independence.
Decomposition multiplicative_decompose(const Lattice& lat, const LatticeProcess& c,
                                       std::span<const std::size_t> order);

/// G along a path given as a move sequence (true = up), one entry per step:
/// returns G(t_0), ..., G(t_k) for k = moves.size().
std::vector<double> survival_along(const Lattice& lat, const Decomposition& dec,
                                   const std::vector<bool>& moves);

struct DecompositionReport {
    double max_martingale_residual = 0.0;
    double max_product_residual = 0.0;
    bool non_increasing = true;
    bool positive = true;
    bool starts_at_one = true;
    bool previsible = true;
    /// Every node has E[e^{-rt} c next] > e^{-rt} c.
    bool c_strict = true;
    /// Every one-step factor is < 1.
    bool g_strict = true;
    double residual_tolerance = 1e-12;
    std::vector<std::string> failures;

    bool martingale_ok() const noexcept { return max_martingale_residual <= residual_tolerance; }
    bool equivalence_holds() const noexcept { return c_strict == g_strict; }
    bool passed() const noexcept;
    /// "strict" or "not strict", describing G.
    std::string strictness() const { return g_strict ? "strict" : "not strict"; }
};

DecompositionReport verify_decomposition(const Lattice& lat, const LatticeProcess& c,
                                         const Decomposition& dec, double tol = 1e-12);

struct RefinementLevel {
    std::size_t steps = 0;
    double max_relative_deviation = 0.0;
};

struct SurvivalComparison {
    std::vector<RefinementLevel> levels;
    bool decreasing = false;
};

/// Compares the lattice G along `paths` random lattice paths with
/// exp(-(l+ - l-) gamma_plus - l- t) evaluated on the same paths, at
/// steps, 2 steps and 4 steps. Requires steps >= 50.
SurvivalComparison lattice_survival_comparison(const ModelParams& p, std::size_t steps,
                                               std::size_t paths = 200, std::uint64_t seed = 1);

/// Deviation of the lattice G from the exponential formula along one path.
double survival_deviation(const Lattice& lat, const Decomposition& dec, const ModelParams& p,
                          const std::vector<bool>& moves);

std::vector<Check> to_checks(const DecompositionReport& report, const std::string& prefix);

}  // namespace hazard
