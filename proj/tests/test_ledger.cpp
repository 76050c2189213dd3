#include "dfmm/ledger.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dfmm;

namespace {

Units u(double x) { return Units::from_double(x); }
Money m(double x) { return Money::from_double(x); }

AssetCurves unit_curves() {
    Eldf c = make_eldf(0, 0, 1, 0, 1e6);
    return {c, c};
}

CurveBook unit_book(std::initializer_list<const char*> ids) {
    CurveBook b;
    for (const char* id : ids) b[id] = unit_curves();
    return b;
}

template <typename F>
ErrorCode code_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError; // sentinel: nothing thrown
}

} // namespace

TEST(Pool, DepositAndOpenInventory) {
    AssetPool p{"X", {}, {}};
    p = deposit_plp(p, u(100));
    EXPECT_EQ(p.inventory, u(100));
    EXPECT_EQ(p.lp_inventory, u(100));
    EXPECT_TRUE(open_inventory(p).is_zero());

    AssetPool q{"X", u(120), u(100)};
    q = deposit_plp(q, u(50));
    EXPECT_EQ(q.inventory, u(170));
    EXPECT_EQ(q.lp_inventory, u(150));
    EXPECT_EQ(open_inventory(q), u(20));
    EXPECT_EQ(open_inventory(AssetPool{"X", u(80), u(100)}), u(-20));
    EXPECT_EQ(code_of([&] { deposit_plp(q, Units::zero()); }), ErrorCode::NonPositiveAmount);
}

TEST(Pool, Withdraw) {
    Eldf bid = make_eldf(0, 0, 1, 0, 1000);
    auto w = withdraw_plp(AssetPool{"X", u(100), u(100)}, u(40), &bid);
    EXPECT_EQ(w.in_kind, u(40));
    EXPECT_TRUE(w.paid.is_zero());
    EXPECT_EQ(w.pool.inventory, u(60));
    EXPECT_EQ(w.pool.lp_inventory, u(60));

    auto s = withdraw_plp(AssetPool{"X", u(30), u(100)}, u(100), &bid);
    EXPECT_EQ(s.in_kind, u(30));
    EXPECT_EQ(s.paid, m(70));
    EXPECT_TRUE(s.pool.inventory.is_zero());

    EXPECT_EQ(code_of([&] { withdraw_plp(AssetPool{"X", u(100), u(100)}, u(101), &bid); }), ErrorCode::ExceedsLpClaim);
    EXPECT_EQ(code_of([&] { withdraw_plp(AssetPool{"X", u(30), u(100)}, u(50), nullptr); }),
              ErrorCode::ValuationUnavailable);
}

TEST(Pool, DepositWithdrawRoundTrip) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> d(0.001, 500.0);
    for (int i = 0; i < 1000; ++i) {
        AssetPool p{"X", u(d(g)), u(d(g))};
        Units a = u(d(g));
        auto w = withdraw_plp(deposit_plp(p, a), a, nullptr);
        if (w.paid.is_positive()) continue;
        EXPECT_EQ(w.pool.inventory, p.inventory);
        EXPECT_EQ(w.pool.lp_inventory, p.lp_inventory);
    }
}

TEST(Synthetic, Netting) {
    SyntheticPool s{"X", {}};
    s = apply_synthetic_flow(s, m(10), m(4));
    EXPECT_EQ(s.t, m(6));
    s = apply_synthetic_flow(s, m(0), m(6));
    EXPECT_TRUE(s.t.is_zero());
    EXPECT_EQ(code_of([&] { apply_synthetic_flow(s, m(-1), m(0)); }), ErrorCode::NegativeFlow);
}

TEST(Hedge, TargetSignsOpposeOpenInventory) {
    auto c = unit_curves();
    EXPECT_TRUE(hedge_target(AssetPool{"X", u(100), u(100)}, c).is_zero());
    EXPECT_EQ(hedge_target(AssetPool{"X", u(120), u(100)}, c), m(-20));
    EXPECT_EQ(hedge_target(AssetPool{"X", u(80), u(100)}, c), m(20));
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> d(1.0, 200.0);
    for (int i = 0; i < 500; ++i) {
        AssetPool p{"X", u(d(g)), u(d(g))};
        Units o = open_inventory(p);
        if (o.is_zero()) continue;
        EXPECT_NE(o.is_negative(), hedge_target(p, c).is_negative());
    }
}

TEST(Solvency, Examples) {
    auto curves = unit_book({"X", "Y"});
    BalanceSheet s;
    s.add_asset("X");
    s.add_asset("Y");
    s.deposit_plp("X", u(100));
    s.deposit_plp("Y", u(100));
    auto even = solvency_check(s, curves);
    EXPECT_TRUE(even.solvent);
    EXPECT_TRUE(even.surplus.is_zero());

    s.adjust_inventory("X", u(20));
    s.adjust_inventory("Y", u(-10));
    EXPECT_EQ(solvency_check(s, curves).surplus, m(10));

    BalanceSheet t;
    t.add_asset("X");
    t.add_asset("Y");
    t.deposit_plp("X", u(100));
    t.deposit_plp("Y", u(100));
    t.adjust_inventory("X", u(-20));
    auto r = solvency_check(t, curves);
    EXPECT_FALSE(r.solvent);
    EXPECT_EQ(r.deficit(), m(20));

    CurveBook only_x = unit_book({"X"});
    EXPECT_EQ(code_of([&] { solvency_check(t, only_x); }), ErrorCode::ValuationUnavailable);
}

TEST(Sheet, SwapMovesInventoryAndSyntheticFlow) {
    BalanceSheet s;
    s.add_asset("X");
    s.add_asset("Y");
    s.deposit_plp("X", u(100));
    s.deposit_plp("Y", u(100));
    s.commit_swap({1, "X", "Y", u(10), u(9), m(10), m(9), m(0.5), m(0.4), m(0.1)});
    EXPECT_EQ(s.pool("X").inventory, u(110));
    EXPECT_EQ(s.pool("Y").inventory, u(91));
    EXPECT_EQ(s.t("X"), m(-9));
    EXPECT_EQ(s.t("Y"), m(9));
    EXPECT_EQ(s.asset("X").premium_reserve, m(0.5));
    EXPECT_EQ(s.asset("Y").slot.v_minus, u(9));
    EXPECT_EQ(code_of([&] { s.commit_swap({2, "X", "Y", u(1), u(500), m(1), m(1), {}, {}, {}}); }),
              ErrorCode::InsufficientInventory);
    EXPECT_EQ(code_of([&] { s.pool("Z"); }), ErrorCode::UnknownAsset);
}

TEST(Sheet, SlotsChainEndToStart) {
    BalanceSheet s;
    s.add_asset("X");
    s.start_slot("X", 1, 5);
    s.start_slot("X", 2, 9);
    const auto& closed = s.asset("X").closed_slots;
    ASSERT_EQ(closed.size(), 2u);
    EXPECT_EQ(closed[1].start_time, 5);
    EXPECT_EQ(closed[1].end_time, 9);
    EXPECT_EQ(s.asset("X").slot.start_time, 9);
}

TEST(Sheet, ReplayReproducesBalancesExactly) {
    std::mt19937_64 g(42);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<AssetId> ids{"A", "B", "C"};
    BalanceSheet s;
    for (const auto& id : ids) {
        s.add_asset(id);
        s.deposit_plp(id, u(1000));
    }
    auto curves = unit_book({"A", "B", "C"});
    for (int i = 0; i < 10000; ++i) {
        const AssetId& a = ids[g() % 3];
        const AssetId& b = ids[(g() % 2 + 1 + (&a - ids.data())) % 3];
        double x = d(g);
        try {
            switch (g() % 6) {
            case 0: s.deposit_plp(a, u(50 * x + 1e-6), i); break;
            case 1: s.withdraw_plp(a, u(20 * x + 1e-6), curves, i); break;
            case 2: s.apply_synthetic_flow(a, m(5 * x), m(5 * d(g)), i); break;
            case 3: {
                double vin = 10 * x + 1e-6;
                s.commit_swap({i, a, b, u(vin), u(vin * 0.99), m(vin), m(vin * 0.98), m(vin * 0.005), m(vin * 0.004),
                               m(vin * 0.011)});
                break;
            }
            case 4: s.transfer_reserve(a, m(x - 0.5), i); break;
            default: s.start_slot(a, static_cast<std::uint64_t>(i), i); break;
            }
        } catch (const Error&) {
        }
    }
    auto again = BalanceSheet::replay(s.log(), ids);
    EXPECT_TRUE(same_balances(s, again));
    EXPECT_EQ(again.log().size(), s.log().size());
}

TEST(Sheet, TEqualsNetSyntheticFlowFromLog) {
    BalanceSheet s;
    s.add_asset("X");
    s.add_asset("Y");
    s.deposit_plp("X", u(100));
    s.deposit_plp("Y", u(100));
    s.apply_synthetic_flow("X", m(3), m(1));
    s.commit_swap({1, "Y", "X", u(2), u(2), m(2), m(1.5), {}, {}, m(0.5)});
    Money t;
    for (const auto& e : s.log()) {
        if (auto* f = std::get_if<log_entry::SyntheticFlow>(&e); f && f->asset == "X") t += f->withdrawn - f->deposited;
        if (auto* w = std::get_if<log_entry::Swap>(&e)) {
            if (w->asset_out == "X") t += w->v_prime_s;
            if (w->asset_in == "X") t -= w->v_prime_s;
        }
    }
    EXPECT_EQ(s.t("X"), t);
}
