#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "hazard/verify.hpp"
#include "oracles.hpp"

using namespace hazard;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimulationSetup setup_with(const ModelParams& p, std::size_t steps, std::size_t n)
{
    SimulationSetup s;
    s.params = p;
    s.steps = steps;
    s.n = n;
    return s;
}

ModelParams flat(double lambda)
{
    ModelParams p;
    p.lambda_plus = p.lambda_minus = lambda;
    return p;
}

CylinderEvent box(std::string name, std::vector<double> times, std::vector<std::pair<double, double>> boxes)
{
    return {std::move(name), std::move(times), std::move(boxes), std::nullopt};
}

}  // namespace

TEST(CylinderEvent, Validation)
{
    EXPECT_NO_THROW(CylinderEvent::full_space().validate(2.0));
    EXPECT_THROW(box("x", {1.0, 0.5}, {{0, 1}, {0, 1}}).validate(2.0), DomainError);
    EXPECT_THROW(box("x", {1.0}, {{1, 1}}).validate(2.0), DomainError);
    EXPECT_THROW(box("x", {3.0}, {{0, 1}}).validate(2.0), DomainError);
    EXPECT_THROW(box("x", {1.0}, {}).validate(2.0), DomainError);
}

TEST(CylinderProbability, MatchesGaussianOracles)
{
    EXPECT_EQ(cylinder_probability(CylinderEvent::full_space()), 1.0);
    EXPECT_NEAR(cylinder_probability(box("pos", {1.0}, {{0.0, kInf}})), 0.5, 1e-12);
    EXPECT_NEAR(cylinder_probability(box("band", {0.7}, {{-0.3, 1.1}})),
                oracle::normal_cdf(1.1 / std::sqrt(0.7)) - oracle::normal_cdf(-0.3 / std::sqrt(0.7)), 1e-10);
    const double two = cylinder_probability(box("two", {0.5, 1.5}, {{0.0, 1.0}, {-1.0, 0.0}}));
    EXPECT_NEAR(two, oracle::bivariate_box(0.5, 0.0, 1.0, 1.5, -1.0, 0.0), 1e-8);
    const double signs = cylinder_probability(box("signs", {1.0, 2.0}, {{0.0, kInf}, {0.0, kInf}}));
    // P(W1 > 0, W2 > 0) = 1/4 + asin(corr)/(2 pi), corr = sqrt(1/2).
    EXPECT_NEAR(signs, 0.25 + std::asin(std::sqrt(0.5)) / (2.0 * std::numbers::pi), 1e-8);
    EXPECT_THROW(cylinder_probability(box("four", {0.2, 0.4, 0.6, 0.8}, {{0, 1}, {0, 1}, {0, 1}, {0, 1}})),
                 DomainError);
}

TEST(QIdentity, FullSpace)
{
    const TestReport rep = verify_q_identity(CylinderEvent::full_space(), 0.0, 2.0, setup_with({}, 200, 20000));
    ASSERT_EQ(rep.checks.size(), 2u);
    EXPECT_TRUE(rep.passed());
}

TEST(QIdentity, EmptyBoxIsExactlyZero)
{
    const auto ev = box("far", {1.0}, {{50.0, 60.0}});
    const TestReport rep = verify_q_identity(ev, 0.5, 1.5, setup_with({}, 100, 1000));
    for (const Check& ch : rep.checks) {
        EXPECT_EQ(ch.statistic, 0.0);
        EXPECT_TRUE(ch.passed);
    }
}

TEST(QIdentity, ConstantHazardAndBoxes)
{
    const auto ev = box("pos", {1.0}, {{0.0, kInf}});
    EXPECT_TRUE(verify_q_identity(ev, 0.5, 1.5, setup_with(flat(0.3), 100, 20000)).passed());
    EXPECT_TRUE(verify_q_identity(ev, 0.5, 1.5, setup_with({}, 100, 20000)).passed());
    EXPECT_THROW(verify_q_identity(ev, 1.5, 0.5, setup_with({}, 100, 1000)), DomainError);
}

TEST(Restriction, AgreesWithQuadratureAndSymmetry)
{
    const SimulationSetup s = setup_with({}, 100, 20000);
    EXPECT_TRUE(verify_restriction(CylinderEvent::full_space(), s).passed());
    EXPECT_TRUE(verify_restriction(box("pos", {1.0}, {{0.0, kInf}}), s).passed());
    EXPECT_TRUE(verify_restriction(box("two", {0.5, 1.5}, {{0.0, 1.0}, {-1.0, 0.0}}), s).passed());
    EXPECT_TRUE(verify_restriction(box("four", {0.4, 0.8, 1.2, 1.6}, {{-kInf, 0}, {-kInf, 0}, {0, kInf}, {0, kInf}}), s)
                    .passed());
}

TEST(ConditionalSurvival, ModelPasses)
{
    const TestReport rep = verify_conditional_survival(1.0, setup_with({}, 200, 20000));
    EXPECT_EQ(rep.checks.size(), 10u);
    EXPECT_TRUE(rep.passed());
}

TEST(ConditionalSurvival, ConstantHazardBucketsAreDegenerate)
{
    EXPECT_TRUE(verify_conditional_survival(1.0, setup_with(flat(0.3), 100, 5000)).passed());
}

TEST(ConditionalSurvival, MiswiredSamplerIsDetected)
{
    SimulationSetup s = setup_with({}, 200, 20000);
    s.wiring = SamplerWiring::reuse_gaussian;
    EXPECT_FALSE(verify_conditional_survival(1.0, s).passed());
}

TEST(Martingale, StockAndBondPassUndiscountedFails)
{
    const SimulationSetup s = setup_with({}, 100, 20000);
    const std::array procs{MartingaleProcess::discounted_stock, MartingaleProcess::discounted_bond,
                           MartingaleProcess::undiscounted_stock};
    const std::vector<CylinderEvent> events{CylinderEvent::full_space()};
    const TestReport rep = verify_martingale(procs, 0.5, 1.5, events, s);
    ASSERT_EQ(rep.checks.size(), 3u);
    EXPECT_TRUE(rep.checks[0].passed) << rep.checks[0].name;
    EXPECT_TRUE(rep.checks[1].passed) << rep.checks[1].name;
    EXPECT_FALSE(rep.checks[2].passed) << rep.checks[2].name;
    EXPECT_TRUE(expect_failure("control", TestReport{{rep.checks[2]}}).passed);
    EXPECT_FALSE(expect_failure("control", TestReport{{rep.checks[0]}}).passed);
}

TEST(Martingale, ConstantHazardCgHasNoIncrement)
{
    const SimulationSetup s = setup_with(flat(0.3), 100, 2000);
    const std::array procs{MartingaleProcess::discounted_cg};
    const auto events = standard_events(s.grid(), 1.0, false);
    const TestReport rep = verify_martingale(procs, 1.0, 1.5, events, s);
    for (const Check& ch : rep.checks) {
        EXPECT_LE(std::abs(ch.statistic), 1e-15) << ch.name;
        EXPECT_TRUE(ch.passed);
    }
}

TEST(Martingale, EventsMayNotLookAhead)
{
    const SimulationSetup s = setup_with({}, 100, 200);
    const std::array procs{MartingaleProcess::discounted_stock};
    const std::vector<CylinderEvent> late{box("late", {1.5}, {{0.0, kInf}})};
    EXPECT_THROW(verify_martingale(procs, 1.0, 2.0, late, s), DomainError);
}

TEST(StandardEvents, FamilySizes)
{
    const TimeGrid grid(2.0, 200);
    const auto plain = standard_events(grid, 1.0, false);
    const auto with_default = standard_events(grid, 1.0, true);
    EXPECT_EQ(plain.size(), 24u);
    EXPECT_EQ(with_default.size(), 48u);
    for (const auto& ev : with_default)
        EXPECT_LE(ev.last_time(), 1.0 + 1e-12) << ev.name;
}

TEST(Submartingale, ModelIsStrict)
{
    const std::array<std::pair<double, double>, 2> pairs{{{0.5, 1.0}, {1.0, 1.5}}};
    const TestReport rep = verify_strict_submartingale(pairs, setup_with({}, 200, 20000));
    EXPECT_EQ(rep.checks.size(), 40u);
    for (const Check& ch : rep.checks)
        EXPECT_TRUE(ch.passed) << ch.name;
}

TEST(Submartingale, DiscountedMartingaleCandidateIsNotStrict)
{
    const ModelParams p;
    SimulationSetup s = setup_with(p, 100, 5000);
    s.pre_default = [p](double t, double) { return std::exp(-p.r * (p.T - t)); };
    const std::array<std::pair<double, double>, 1> pairs{{{0.5, 1.0}}};
    EXPECT_FALSE(verify_strict_submartingale(pairs, s).passed());
}

TEST(Submartingale, DecreasingCandidateFails)
{
    SimulationSetup s = setup_with({}, 100, 5000);
    s.pre_default = [](double t, double) { return t >= 2.0 ? 1.0 : 0.9 - 0.05 * t; };
    const std::array<std::pair<double, double>, 1> pairs{{{0.5, 1.0}}};
    const TestReport rep = verify_strict_submartingale(pairs, s);
    for (const Check& ch : rep.checks)
        if (ch.name.ends_with("c_increases"))
            EXPECT_FALSE(ch.passed) << ch.name;
}

TEST(Reports, ReproducibleAcrossWorkerCounts)
{
    SimulationSetup s = setup_with({}, 100, 3000);
    s.parallel.workers = 1;
    const TestReport a = verify_conditional_survival(1.0, s);
    s.parallel.workers = 3;
    const TestReport b = verify_conditional_survival(1.0, s);
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t k = 0; k < a.checks.size(); ++k) {
        EXPECT_EQ(a.checks[k].name, b.checks[k].name);
        EXPECT_EQ(a.checks[k].statistic, b.checks[k].statistic);
        EXPECT_EQ(a.checks[k].se, b.checks[k].se);
    }
}

TEST(RankBuckets, EqualCountsAndTies)
{
    const std::vector<double> keys{3.0, 1.0, 2.0, 1.0, 5.0, 4.0};
    const auto b = rank_buckets(keys, 3);
    EXPECT_EQ(b, (std::vector<std::size_t>{1, 0, 1, 0, 2, 2}));
    EXPECT_THROW(rank_buckets(keys, 0), DomainError);
}
