#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hazard/model.hpp"
#include "hazard/pricing.hpp"
#include "hazard/scenario.hpp"
#include "hazard/stats.hpp"

namespace hazard {

/// Price of the defaultable bond at a grid node of a scenario. The default
/// reads Scenario::d; detectors are exercised against faulty replacements.
using BondPriceFn = std::function<double(const Scenario&, std::size_t grid_index)>;

/// The information a position rule may use: the scenario up to a cutoff
/// node. Brownian quantities after the cutoff are refused, and the default
/// indicator is only visible for bond-market strategies, whose positions may
/// react to it.
class History {
public:
    History(const Scenario& sc, std::size_t cutoff, bool default_visible,
            const BondPriceFn* price = nullptr) noexcept
        : sc_(&sc), cutoff_(cutoff), default_visible_(default_visible), price_(price)
    {
    }

    std::size_t index() const noexcept { return cutoff_; }
    double time() const { return sc_->w.grid.time(cutoff_); }
    double w() const { return sc_->w.w[cutoff_]; }
    /// W at grid node i <= cutoff.
    double w_at(std::size_t i) const;
    double s() const { return sc_->s[cutoff_]; }
    /// Pre-default value at the cutoff (must be an observed node).
    double c() const { return sc_->c_at(cutoff_); }
    double g() const { return sc_->survival.g[cutoff_]; }
    /// cutoff time < tau. Throws DomainError when the default is hidden.
    bool survived() const;
    /// Defaultable bond price at the cutoff. Throws DomainError when the
    /// default is hidden.
    double d() const;

private:
    const Scenario* sc_;
    std::size_t cutoff_;
    bool default_visible_;
    const BondPriceFn* price_;
};

/// European claim paying payoff(W(maturity)) at `maturity`, a grid node.
/// Before maturity its value is B(t, maturity) E[payoff(W(maturity)) | W(t)]
/// (Gauss-Hermite); after maturity the proceeds sit in the riskless bond.
struct Claim {
    double maturity = 0.0;
    std::function<double(double w)> payoff;
    std::size_t nodes = 64;

    double conditional_value(double t, double w, double r) const;
    double value(const Scenario& sc, std::size_t grid_index, double r) const;
};

/// Units held over one rebalancing interval.
struct Positions {
    double shares = 0.0;
    /// Units of the riskless bond B(., T).
    double bonds = 0.0;
    double claim_units = 0.0;
    /// Units of the defaultable bond.
    double defaultable = 0.0;
};

/// Positions chosen from the information at a rebalancing time.
using PositionRule = std::function<Positions(const History&)>;

PositionRule hold(Positions x);

/// Self-financing Black-Scholes leg: constant units of S and B(., T) plus
/// optional units of one replicated claim. With `balance_funded` the bond
/// units returned by the rule are replaced by whatever makes the rebalance at
/// the leg's start cost nothing, so the strategy is self-financing by
/// construction.
struct BSLeg {
    std::optional<Claim> claim;
    bool balance_funded = false;
};

/// A quasi-simple strategy: rebalancing times 0 = s_0 < ... < s_N = T, one
/// BS leg and one position rule per interval (s_{n-1}, s_n]. After default
/// the leg and positions current at the default are kept.
struct QuasiSimpleStrategy {
    std::string name;
    std::vector<double> times;
    std::vector<BSLeg> legs;
    std::vector<PositionRule> rules;
    double initial_value = 0.0;

    std::size_t intervals() const noexcept { return legs.size(); }
    /// Throws DomainError for inconsistent sizes or times.
    void validate(const ModelParams& p) const;
};

struct StrategyRun {
    /// mu = max{m : s_{m-1} < tau}, the last leg entered.
    std::size_t mu = 0;
    /// positions[n-1], resolved at s_{n-1}, for n = 1..mu.
    std::vector<Positions> positions;
    /// V at each observed node of the scenario.
    std::vector<double> value;
    /// |V(s_n) - V(s_n+)| at each rebalancing actually carried out.
    std::vector<double> gaps;

    double terminal() const { return value.back(); }
    /// The leg in force at time t, n wedge mu for t in (s_{n-1}, s_n].
    std::size_t leg_at(const QuasiSimpleStrategy& strat, double t) const;
};

/// Runs `strat` on `sc`. The strategy times must be observed nodes of `sc`.
StrategyRun run_strategy(const QuasiSimpleStrategy& strat, const Scenario& sc, const ModelParams& p);

/// Value of the BS part (stock, riskless bond, claim) of `x` at grid node i.
double leg_value(const BSLeg& leg, const Positions& x, const Scenario& sc, std::size_t i,
                 const ModelParams& p);

std::vector<double> value_process(const QuasiSimpleStrategy& strat, const Scenario& sc,
                                  const ModelParams& p);

/// True iff every rebalancing moves the value by at most tol. The right
/// limit at s_n is evaluated exactly, as every leg value is continuous.
bool check_self_financing(const QuasiSimpleStrategy& strat, const Scenario& sc,
                          const ModelParams& p, double tol = 1e-10);

/// The arbitrage built on the event A = {e^{-r t1} c(t1) >= E[e^{-r t2} c(t2) | F_t1]}:
/// on A and t1 < tau, sell one defaultable bond at t1, replicate c(t2) with
/// the BS leg, bank the balance, and move everything into B at t2.
struct TheoremArbitrage {
    QuasiSimpleStrategy strategy;
    double t1 = 0.0;
    double t2 = 0.0;
    PreDefaultFn candidate;
    std::size_t nodes = 64;

    /// E[c(t2) | W(t1) = w] under the Black-Scholes measure.
    double continuation(double w) const;
    /// e^{-r t1} c(t1) >= e^{-r t2} E[c(t2) | W(t1) = w].
    bool in_a(double c1, double w, double r) const;
    /// The closed-form terminal value, written in units of B(., T):
    /// c(t2)/B(t2,T) 1_{A, t1 < tau <= t2} + (c(t1) - B(t1,t2) E[c(t2)|F_t1])/B(t1,T) 1_{A, t1 < tau}.
    double terminal_identity(const Scenario& sc, const ModelParams& p) const;
};

/// Throws DomainError unless 0 <= t1 < t2 <= T. Scenarios must carry the
/// candidate as their pre-default value and observe t1 and t2.
TheoremArbitrage build_theorem_arbitrage(double t1, double t2, const ModelParams& p,
                                         PreDefaultFn candidate, std::size_t nodes = 64);

struct RandomStrategyOptions {
    /// Rebalancing times are drawn from multiples of T / time_slots.
    std::size_t time_slots = 8;
    std::size_t max_interior_times = 3;
    double max_bond_position = 10.0;
    /// Stock units are bounded so that |units| s0 <= max_notional_factor s0.
    double max_notional_factor = 10.0;
    double claim_probability = 0.5;
};

/// Zero-cost random strategy number k: bounded positions in D that depend
/// on the sign of W at the rebalancing time, random constant stock legs,
/// sometimes a bounded smooth claim, all balance-funded.
QuasiSimpleStrategy random_strategy(std::uint64_t seed, std::size_t k, const ModelParams& p,
                                    const RandomStrategyOptions& opts = {});

/// Rebalancing times used by a set of strategies.
std::vector<double> strategy_times(const std::vector<QuasiSimpleStrategy>& strategies);

struct BatteryReport {
    std::vector<Check> checks;
    std::vector<Estimate> discounted_terminal;
    bool passed() const noexcept { return all_passed(checks); }
};

/// Under the martingale measure a zero-cost self-financing strategy has
/// E[e^{-rT} V(T)] = 0. For each strategy, checks the batch-means mean of
/// e^{-rT} V(T) over setup.n scenarios against 4 SE, plus V(0) = 0.
BatteryReport nqsa_battery(const std::vector<QuasiSimpleStrategy>& strategies, const SimulationSetup& setup);

/// Bond-market strategy: positions in B(., T) and D fixed at each s_{n-1}
/// from information that includes the default indicator. No default freeze;
/// rules must leave shares and claim units at zero.
struct BDSimpleStrategy {
    std::string name;
    std::vector<double> times;
    std::vector<PositionRule> rules;

    std::size_t intervals() const noexcept { return rules.size(); }
    void validate(const ModelParams& p) const;
};

struct BDRun {
    std::vector<double> value;
    std::vector<double> gaps;
    double terminal() const { return value.back(); }
};

BDRun run_bd_strategy(const BDSimpleStrategy& strat, const Scenario& sc, const ModelParams& p,
                      const BondPriceFn& price = {});

std::vector<double> bd_value_process(const BDSimpleStrategy& strat, const Scenario& sc,
                                     const ModelParams& p, const BondPriceFn& price = {});

/// On A = {D(t) 1_{tau <= t} > 0} sell one bond at t, on A' = {... < 0}
/// buy one, banking the proceeds. Terminal value |D(t)| / B(t, T) on A u A'.
BDSimpleStrategy build_postdefault_detector(double t, const ModelParams& p);

/// On B' = {c(t) >= 1} sell, on B = {c(t) <= 0} buy one bond at t if t < tau.
BDSimpleStrategy build_range_detector(double t, const ModelParams& p);

/// A bond price that adds `bump` to D at node t_index on scenarios that
/// defaulted by then.
BondPriceFn postdefault_fault(std::size_t grid_index, double bump);

/// dU/dS of a claim by central differences in W: (U(w + h) - U(w - h)) / (2 h sigma S).
/// Carries O(h^2) truncation error on top of the quadrature error.
double claim_delta(const Claim& claim, double t, double w, double s, const ModelParams& p, double h = 1e-4);

/// Terminal error of hedging the claim from t_index to maturity with the
/// finite-difference delta, rebalanced at every grid node along `sc`.
/// Shrinks roughly like sqrt(dt).
double delta_hedge_error(const Claim& claim, const Scenario& sc, std::size_t t_index, const ModelParams& p);

}  // namespace hazard
