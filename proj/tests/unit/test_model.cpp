#include <gtest/gtest.h>

#include <cmath>

#include "hazard/model.hpp"

using namespace hazard;

TEST(ValidateParams, ReferenceParametersAreAccepted)
{
    const ModelParams p = ModelParams::reference();
    EXPECT_EQ(validate_params(p), p);
    EXPECT_DOUBLE_EQ(p.T, 2.0);
    EXPECT_DOUBLE_EQ(p.r, 0.1);
    EXPECT_DOUBLE_EQ(p.lambda_plus, 0.5);
    EXPECT_DOUBLE_EQ(p.lambda_minus, 0.1);
}

TEST(ValidateParams, ZeroHazardNamesTheField)
{
    ModelParams p;
    p.lambda_plus = 0.0;
    try {
        validate_params(p);
        FAIL() << "expected ParamError";
    } catch (const ParamError& e) {
        EXPECT_EQ(e.field(), "lambda_plus");
        EXPECT_STREQ(e.what(), "lambda_plus must be > 0");
    }
}

TEST(ValidateParams, NegativeHorizonNamesTheField)
{
    ModelParams p;
    p.T = -1.0;
    try {
        validate_params(p);
        FAIL() << "expected ParamError";
    } catch (const ParamError& e) {
        EXPECT_EQ(e.field(), "T");
        EXPECT_STREQ(e.what(), "T must be > 0");
    }
}

TEST(ValidateParams, EveryFieldIsChecked)
{
    auto field_of = [](ModelParams p) {
        try {
            validate_params(p);
        } catch (const ParamError& e) {
            return e.field();
        }
        return std::string{};
    };
    ModelParams p;
    p.r = -0.01;
    EXPECT_EQ(field_of(p), "r");
    p = {};
    p.sigma = 0.0;
    EXPECT_EQ(field_of(p), "sigma");
    p = {};
    p.s0 = -5.0;
    EXPECT_EQ(field_of(p), "s0");
    p = {};
    p.lambda_minus = 0.0;
    EXPECT_EQ(field_of(p), "lambda_minus");
    p = {};
    p.T = std::nan("");
    EXPECT_EQ(field_of(p), "T");
    p = {};
    p.r = 0.0;
    EXPECT_EQ(field_of(p), "");
}

TEST(TimeGrid, LastNodeIsExactlyTheHorizon)
{
    const TimeGrid g(2.0, 3);
    EXPECT_EQ(g.size(), 4u);
    EXPECT_EQ(g.time(3), 2.0);
    EXPECT_DOUBLE_EQ(g.time(1), 2.0 / 3.0);
    EXPECT_THROW(g.time(4), std::out_of_range);
}

TEST(TimeGrid, IndexLookupToleratesRoundingOnly)
{
    const TimeGrid g(2.0, 2000);
    EXPECT_EQ(g.index_of(0.5), 500u);
    EXPECT_EQ(g.index_of(1.5), 1500u);
    EXPECT_EQ(g.index_of(2.0), 2000u);
    EXPECT_FALSE(g.index_of(0.5005).has_value());
    EXPECT_FALSE(g.index_of(-0.001).has_value());
    EXPECT_THROW(g.require_index(0.0004), DomainError);
}

TEST(TimeGrid, ShiftedGridKeepsSpacing)
{
    const TimeGrid g = TimeGrid(1.0, 10).shifted(1.0);
    EXPECT_DOUBLE_EQ(g.time(0), 1.0);
    EXPECT_EQ(g.time(10), 2.0);
    EXPECT_EQ(g.index_of(1.5), 5u);
}

TEST(TimeGrid, RejectsDegenerateGrids)
{
    EXPECT_THROW(TimeGrid(1.0, 0), DomainError);
    EXPECT_THROW(TimeGrid(0.0, 10), DomainError);
}

TEST(DefaultTime, StrictInequalityAtTheDefault)
{
    const DefaultTime d = DefaultTime::in_horizon(1.0);
    EXPECT_TRUE(d.survives(0.999));
    EXPECT_FALSE(d.survives(1.0));
    EXPECT_TRUE(d.defaulted_by(1.0));
    EXPECT_DOUBLE_EQ(d.time(), 1.0);
    EXPECT_THROW(DefaultTime::in_horizon(0.0), DomainError);

    const DefaultTime never = DefaultTime::beyond_horizon();
    EXPECT_TRUE(never.survives(1e9));
    EXPECT_THROW(never.time(), DomainError);
}

TEST(RisklessBond, ClosedForm)
{
    const ModelParams p;
    EXPECT_DOUBLE_EQ(riskless_bond(0.0, p), std::exp(-0.2));
    EXPECT_EQ(riskless_bond(p.T, p), 1.0);
}
