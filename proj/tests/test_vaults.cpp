#include "dfmm/vaults.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dfmm;

namespace {

Units u(double x) { return Units::from_double(x); }
Money m(double x) { return Money::from_double(x); }

Vault vault(VaultSide s, double c, double rho = 0.5, double eps = 0.0) { return make_vault("X", s, m(c), rho, m(eps)); }

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

TEST(Utilisation, Examples) {
    auto l = vault(VaultSide::long_side, 60), s = vault(VaultSide::short_side, 50);
    auto even = utilisation(AssetPool{"X", u(100), u(100)}, l, s);
    EXPECT_EQ(even.u_rhs, 0.0);
    EXPECT_EQ(even.u_lhs, 0.0);
    EXPECT_DOUBLE_EQ(utilisation(AssetPool{"X", u(80), u(100)}, l, s).u_rhs, 0.2);
    EXPECT_DOUBLE_EQ(utilisation(AssetPool{"X", u(130), u(100)}, l, s).u_lhs, 0.25);
}

TEST(Utilisation, ZeroCapacity) {
    auto l = vault(VaultSide::long_side, 0), s = vault(VaultSide::short_side, 0);
    EXPECT_EQ(code_of([&] { utilisation(AssetPool{"X", u(80), u(100)}, l, s); }), ErrorCode::ZeroCapacity);
    EXPECT_EQ(utilisation(AssetPool{"X", u(100), u(100)}, l, s).u_rhs, 0.0);
}

TEST(Cover, ExamplesAndBoundaryGrid) {
    EXPECT_DOUBLE_EQ(cover_coefficient(0.5, 0.5, 2, 1, 2), 0.875);
    for (double k : {0.5, 1.0, 3.0}) {
        for (double dmin : {0.0, 0.001, 0.5}) {
            for (double dmax : {0.5, 0.01 + 0.5, 7.0}) {
                EXPECT_EQ(cover_coefficient(0, dmin, dmax, 0.8, k), dmin);
                EXPECT_EQ(cover_coefficient(0.8, dmin, dmax, 0.8, k), dmax);
                EXPECT_EQ(cover_coefficient(5.0, dmin, dmax, 0.8, k), dmax);
            }
        }
    }
    EXPECT_EQ(code_of([] { cover_coefficient(0.1, 2, 1, 1, 2); }), ErrorCode::BadParams);
    EXPECT_EQ(code_of([] { cover_coefficient(0.1, 0, 1, 0, 2); }), ErrorCode::BadParams);
    EXPECT_EQ(code_of([] { cover_coefficient(0.1, 0, 1, 1, 0); }), ErrorCode::BadParams);
}

TEST(Cover, Monotone) {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> d(0, 1);
    for (int i = 0; i < 1000; ++i) {
        double k = 0.2 + 3 * d(g), lo = d(g), hi = lo + 0.01 + d(g);
        double a = d(g), b = d(g);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        EXPECT_LT(cover_coefficient(a, lo, hi, 1, k), cover_coefficient(b, lo, hi, 1, k));
    }
}

TEST(Settlement, Examples) {
    Eldf prev = make_eldf(0, 0, 1, 0, 100);
    Eldf up = make_eldf(0, 0, 1.1, 0, 100);
    Eldf down = make_eldf(0, 0, 0.9, 0, 100);
    SwaptionPosition pos = strike_swaption(AssetPool{"X", u(90), u(100)}, prev);
    EXPECT_EQ(pos.notional, u(10));
    EXPECT_EQ(pos.direction, SwaptionDirection::protocol_pays_fixed);
    EXPECT_EQ(settle_swaption(pos, prev, prev), 0.0);
    EXPECT_NEAR(settle_swaption(pos, prev, up), 1.0, 1e-12);
    EXPECT_NEAR(settle_swaption(pos, prev, up, SettlementBasis::units), 1.0, 1e-12);

    // the long vault covers a surplus and owes on a value drop
    SwaptionPosition surplus = strike_swaption(AssetPool{"X", u(110), u(100)}, prev);
    Vault lv = vault(VaultSide::long_side, 0.5);
    Money hedge;
    auto r = apply_settlement(surplus, settle_swaption(surplus, prev, down), lv, hedge);
    EXPECT_TRUE(r.vault_pays);
    EXPECT_TRUE(r.capped);
    EXPECT_EQ(r.paid, m(0.5));
    EXPECT_TRUE(lv.collateral.is_zero());
    EXPECT_TRUE(r.liquidated);
    EXPECT_EQ(hedge, m(0.5));

    Vault empty = vault(VaultSide::long_side, 0);
    EXPECT_EQ(code_of([&] { apply_settlement(surplus, -1.0, empty, hedge); }), ErrorCode::NoCounterpartyCollateral);
    Eldf flat_zero{0, 0, 0, Side::bid, 0, 0, 100};
    EXPECT_EQ(code_of([&] { settle_swaption(pos, flat_zero, up); }), ErrorCode::ZeroPrevValue);
}

TEST(Settlement, SwappingCurvesFlipsSign) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> d(0, 1);
    for (int i = 0; i < 500; ++i) {
        Eldf a = make_eldf(0, 0.01 * d(g), 0.5 + d(g), 0, 100);
        Eldf b = make_eldf(0, 0.01 * d(g), 0.5 + d(g), 0, 100);
        SwaptionPosition pos = strike_swaption(AssetPool{"X", u(100 - 50 * d(g)), u(100)}, a);
        for (auto basis : {SettlementBasis::value, SettlementBasis::units}) {
            EXPECT_LE(settle_swaption(pos, a, b, basis) * settle_swaption(pos, b, a, basis), 0.0);
        }
    }
}

TEST(Margin, Examples) {
    EXPECT_EQ(margin_check(vault(VaultSide::short_side, 10, 0.5, 1)), MarginStatus::ok);
    EXPECT_EQ(margin_check(vault(VaultSide::short_side, 1, 0.5, 1)), MarginStatus::liquidate);
    EXPECT_EQ(margin_check(vault(VaultSide::short_side, 0)), MarginStatus::liquidate);
    Vault v = vault(VaultSide::short_side, 1, 0.5, 1);
    EXPECT_TRUE(enforce_margin(v));
    EXPECT_EQ(v.capacity(), 0.0);
}

TEST(Bounds, MaxTradeableAndGap) {
    AssetPool p{"X", u(100), u(100)};
    EXPECT_DOUBLE_EQ(max_tradeable(p, vault(VaultSide::long_side, 60), vault(VaultSide::short_side, 40)).v_max_ask, 80.0);
    EXPECT_DOUBLE_EQ(max_tradeable(p, vault(VaultSide::long_side, 60), vault(VaultSide::short_side, 40)).v_max_bid, 120.0);
    EXPECT_DOUBLE_EQ(max_tradeable(p, vault(VaultSide::long_side, 60), vault(VaultSide::short_side, 50)).v_max_ask, 100.0);
    EXPECT_EQ(capital_efficiency_gap(p, vault(VaultSide::short_side, 50)), 0.0);
    EXPECT_DOUBLE_EQ(capital_efficiency_gap(p, vault(VaultSide::short_side, 40)), 20.0);
    EXPECT_DOUBLE_EQ(capital_efficiency_gap(p, vault(VaultSide::short_side, 60)), 20.0);
}

TEST(PremiumFlow, Examples) {
    RebalanceParams p{5, 5, 0.1, 0.1};
    Vault l = vault(VaultSide::long_side, 100), s = vault(VaultSide::short_side, 100);
    auto none = slp_premium_flow(4, 4, p, l, s);
    EXPECT_TRUE(none.total().is_zero());
    auto credit = slp_premium_flow(10, 5, p, l, s);
    EXPECT_EQ(credit.to_short, m(10));
    EXPECT_EQ(s.collateral, m(110));
    EXPECT_TRUE(credit.to_long.is_zero());

    Vault thin = vault(VaultSide::short_side, 3);
    auto debit = slp_premium_flow(5, 10, p, l, thin);
    EXPECT_EQ(debit.to_short, m(-3));
    EXPECT_TRUE(thin.collateral.is_zero());
    EXPECT_TRUE(debit.short_liquidated);

    Vault l2 = vault(VaultSide::long_side, 100), s2 = vault(VaultSide::short_side, 100);
    auto lhs = slp_premium_flow(-10, -5, p, l2, s2);
    EXPECT_EQ(lhs.to_long, m(10));
    EXPECT_TRUE(lhs.to_short.is_zero());
}

TEST(Bundle, CompleteWhenFullyHedged) {
    Eldf c = make_eldf(0, 0, 1, 0, 1000);
    for (double inv : {80.0, 100.0, 130.0}) {
        AssetPool p{"X", u(inv), u(100)};
        EXPECT_TRUE(bundle_delta(p, strike_swaption(p, c)).complete());
    }
    AssetPool p{"X", u(130), u(100)};
    SwaptionPosition stale = strike_swaption(AssetPool{"X", u(120), u(100)}, c);
    EXPECT_DOUBLE_EQ(bundle_delta(p, stale).net(), 10.0);
}

TEST(Property, NonRecourseOverRandomPaths) {
    std::mt19937_64 g(5);
    std::normal_distribution<double> z(0, 0.05);
    std::uniform_real_distribution<double> d(0, 1);
    for (int path = 0; path < 200; ++path) {
        Vault s = vault(VaultSide::short_side, 5 + 20 * d(g));
        Money deposited = s.collateral, hedge;
        Eldf prev = make_eldf(0, 0, 1, 0, 1000);
        for (int e = 0; e < 50 && !s.liquidated; ++e) {
            Eldf now = make_eldf(0, 0, std::max(0.05, prev.c0 * (1 + z(g))), 0, 1000);
            auto pos = strike_swaption(AssetPool{"X", u(50 + 40 * d(g)), u(100)}, prev);
            if (s.collateral.is_positive()) apply_settlement(pos, settle_swaption(pos, prev, now), s, hedge);
            EXPECT_FALSE(s.collateral.is_negative());
            prev = now;
        }
        // losses can only come out of what was deposited
        EXPECT_LE(deposited - s.collateral, deposited);
        EXPECT_EQ(hedge, deposited - s.collateral);
    }
}
