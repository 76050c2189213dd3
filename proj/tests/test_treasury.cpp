#include "dfmm/treasury.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dfmm;

namespace {

Money m(double x) { return Money::from_double(x); }

template <typename F>
ErrorCode code_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

} // namespace

TEST(Discrepancy, Examples) {
    EXPECT_EQ(discrepancy(10, 5, 5, 0.1), 0.0);
    EXPECT_NEAR(discrepancy(10, 5, 7, 0.1), 2.0, 1e-12);
    EXPECT_NEAR(discrepancy(10, 7, 5, 0.1), -2.0, 1e-12);
    EXPECT_NEAR(discrepancy(-10, 5, 7, 0.1), 2.0, 1e-12);
}

TEST(Discrepancy, SignFollowsAggressiveness) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> d(0, 1);
    for (int i = 0; i < 1000; ++i) {
        double t = 20 * (d(g) - 0.5), a = 5 * d(g), b = 5 * d(g), dd = 0.01 + d(g);
        if (t == 0 || a == b) continue;
        EXPECT_EQ(discrepancy(t, a, b, dd) > 0, b > a);
    }
}

TEST(Fee, Rebalancing) {
    EXPECT_TRUE(rebalancing_fee(m(1000), 0).is_zero());
    EXPECT_EQ(rebalancing_fee(m(1000), 0.001), m(1));
    EXPECT_EQ(code_of([] { rebalancing_fee(m(1), 1.0); }), ErrorCode::BadRate);
    EXPECT_EQ(code_of([] { rebalancing_fee(m(1), -0.1); }), ErrorCode::BadRate);
}

TEST(Reserve, Updates) {
    TreasuryReserve r;
    r = treasury_update(r, m(5), {});
    r = treasury_update(r, {}, m(2));
    EXPECT_EQ(r.balance, m(3));
    TreasuryReserve z;
    z = treasury_update(z, {}, m(-2));
    EXPECT_EQ(z.balance, m(2));
    EXPECT_EQ(code_of([&] { treasury_update(r, {}, m(4)); }), ErrorCode::NegativeReserveInvariantBreach);
    EXPECT_TRUE(is_fatal(ErrorCode::NegativeReserveInvariantBreach));
    EXPECT_EQ(r.balance, r.cumulative_xi - r.cumulative_upsilon);
}

TEST(Reward, Accrue) {
    EXPECT_TRUE(reward_accrue(m(100), {0.002, 0.002}).is_zero());
    EXPECT_EQ(reward_accrue(m(100), {0.003, 0.001}), m(0.2));
    EXPECT_EQ(code_of([] { reward_accrue(m(100), {0.001, 0.003}); }), ErrorCode::BadRates);
}

TEST(Reward, SplitFeeIsExact) {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> d(0, 1);
    FeeSchedule f{0.003, 0.001};
    for (int i = 0; i < 10000; ++i) {
        Money vs = m(1000 * d(g));
        Money fee = vs.scaled(f.theta) + Money::from_raw(static_cast<int128>(g() % 7));
        auto s = split_fee(fee, vs, f);
        EXPECT_EQ(s.xi + s.reward, fee);
        EXPECT_FALSE(s.reward.is_negative());
    }
}

TEST(Distribute, EqualThirdsOnTarget) {
    // I = C_S/ϱ = C_L/ϱ with no open inventory puts every class at one third
    auto r = reward_distribute({100, 100, 100, 100}, m(3));
    EXPECT_EQ(r.plp, m(1));
    EXPECT_EQ(r.slp_long, m(1));
    EXPECT_EQ(r.slp_short, m(1));
    auto dust = reward_distribute({100, 100, 100, 100}, Money::from_raw(10));
    EXPECT_EQ(dust.slp_long.raw(), 3);
    EXPECT_EQ(dust.plp.raw(), 4); // residual unit to pLP
    EXPECT_TRUE(reward_distribute({100, 100, 100, 100}, Money::zero()).total().is_zero());
}

TEST(Distribute, PlpOverweightPaysGammaHalvesToSlp) {
    auto r = reward_distribute({200, 200, 50, 50}, m(3), {0.03, 1, 0, 1e-9});
    EXPECT_EQ(r.plp, m(1 - 0.09));
    EXPECT_EQ(r.slp_short, m(1 + 0.045));
    EXPECT_EQ(r.slp_long, m(1 + 0.045));
    EXPECT_EQ(r.total(), m(3));
}

TEST(Distribute, SimplexOverRandomInputs) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> d(0, 1);
    for (int i = 0; i < 10000; ++i) {
        DistributionInputs in{200 * d(g), 200 * d(g), 200 * d(g), 200 * d(g)};
        Money acc = m(5 * d(g));
        auto r = reward_distribute(in, acc, {d(g), 2 * d(g), 0, 1e-9});
        ASSERT_EQ(r.total(), acc);
        ASSERT_FALSE(r.plp.is_negative());
        ASSERT_FALSE(r.slp_long.is_negative());
        ASSERT_FALSE(r.slp_short.is_negative());
    }
}

TEST(Ledger, ClaimsConserveAccrued) {
    RewardLedger led;
    led.accrue("X", m(1));
    led.accrue("X", Money::from_raw(5));
    Money before = led.pending("X");
    std::map<LpClass, std::vector<std::pair<std::string, double>>> stakes{
        {LpClass::plp, {{"p1", 1}, {"p2", 2}}}, {LpClass::slp_short, {{"s", 1}}}};
    auto sh = led.distribute("X", {100, 100, 100, 100}, {}, stakes);
    EXPECT_EQ(sh.total(), before);
    EXPECT_TRUE(led.pending("X").is_zero());
    EXPECT_EQ(led.total_claimable(), before);
    EXPECT_TRUE(led.claims().count({"unassigned", "X", LpClass::slp_long}));
    for (const auto& [k, v] : led.claims()) EXPECT_FALSE(v.is_negative());
    Money p1 = led.claims().at({"p1", "X", LpClass::plp});
    Money p2 = led.claims().at({"p2", "X", LpClass::plp});
    EXPECT_LE((p2 - p1 - p1).abs().raw(), 2);
}
