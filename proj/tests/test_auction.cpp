#include "dfmm/auction.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dfmm;

namespace {

Money m(double x) { return Money::from_double(x); }

SideAuction side(double a, double lambda, double a_min) {
    SideAuction s;
    s.a = a;
    s.lambda = lambda;
    s.a_min = a_min;
    return s;
}

struct Book {
    AuctionBook book;
    ParamBook params;
};

Book make_book(std::initializer_list<const char*> ids, double a, double lambda, double d) {
    Book b;
    for (const char* id : ids) {
        b.book[id] = {side(a, lambda, 0), side(a, lambda, 0)};
        b.params[id] = {a, a, d, d};
    }
    return b;
}

const RegimeThresholds kTh{0.3, 0.6, 0.9};

} // namespace

TEST(Regime, Classify) {
    EXPECT_EQ(classify_regime(0.0, kTh), Regime::optimal);
    EXPECT_EQ(classify_regime(0.7, kTh), Regime::band2);
    EXPECT_EQ(classify_regime(0.3, kTh), Regime::band1);
    EXPECT_EQ(classify_regime(0.9, kTh), Regime::critical);
    EXPECT_EQ(classify_regime(40.0, kTh), Regime::critical);
    // total and ordered for any u
    Regime prev = Regime::optimal;
    for (double u = 0; u < 2; u += 0.001) {
        Regime r = classify_regime(u, kTh);
        EXPECT_GE(static_cast<int>(r), static_cast<int>(prev));
        prev = r;
    }
}

TEST(Regime, Targets) {
    RebalanceTargets t{10, 5, 3};
    EXPECT_EQ(target_for(Regime::band1, t).value, 10);
    EXPECT_FALSE(target_for(Regime::band1, t).in_timesteps);
    EXPECT_EQ(target_for(Regime::band2, t).value, 5);
    EXPECT_EQ(target_for(Regime::critical, t).value, 3);
    EXPECT_TRUE(target_for(Regime::critical, t).in_timesteps);
    try {
        target_for(Regime::optimal, t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoTargetInOptimal);
    }
}

TEST(Progress, CountsAndResets) {
    SideAuction s;
    for (int i = 0; i < 5; ++i) EXPECT_FALSE(record_rebalance_progress(s, 0.1, kTh));
    EXPECT_EQ(s.breach_clock, 0);
    for (int i = 0; i < 4; ++i) EXPECT_FALSE(record_rebalance_progress(s, 0.5, kTh));
    auto r = record_rebalance_progress(s, 0.1, kTh);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->measured, 4);
    EXPECT_EQ(r->peak, Regime::band1);
    EXPECT_EQ(s.breach_clock, 0);

    std::vector<std::int64_t> measured;
    for (double u : {0.31, 0.29, 0.31, 0.31, 0.29}) {
        if (auto x = record_rebalance_progress(s, u, kTh)) measured.push_back(x->measured);
    }
    EXPECT_EQ(measured, (std::vector<std::int64_t>{1, 2}));
}

TEST(Update, Examples) {
    auto down = update_aggressiveness(side(10, 1, 5), 4, Comparison::too_fast, 0.1, m(0));
    EXPECT_DOUBLE_EQ(down.a_after, 9.0);
    EXPECT_DOUBLE_EQ(update_aggressiveness(side(5, 1, 5), 4, Comparison::too_fast, 0.1, m(0)).a_after, 5.0);
    EXPECT_DOUBLE_EQ(update_aggressiveness(side(5, 1, 5), 4, Comparison::on_target, 0.1, m(0)).a_after, 5.0);
    try {
        update_aggressiveness(side(5, 1, 0), 0, Comparison::too_slow, 0.1, m(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InactiveSide);
    }
}

TEST(Update, CapIsTight) {
    double t = 10, a = 5, lambda = 2, d = 0.1;
    Money tr = m(1);
    auto up = update_aggressiveness(side(a, lambda, 0), t, Comparison::too_slow, d, tr);
    EXPECT_TRUE(up.capped);
    EXPECT_NEAR(up.a_after, 6.0, 1e-12);
    // cap line solved for A, substituted directly
    double closed = (tr.to_double() + t * (t + a) * d - t * t * d) / (t * d);
    EXPECT_NEAR(up.a_after, closed, 1e-12);
    double increase = t * (t + up.a_after) * d - t * (t + a) * d;
    EXPECT_NEAR(increase, tr.to_double(), 1e-9);
    EXPECT_EQ(up.upsilon, tr);

    auto full = update_aggressiveness(side(a, lambda, 0), t, Comparison::too_slow, d, m(5));
    EXPECT_FALSE(full.capped);
    EXPECT_DOUBLE_EQ(full.a_after, 7.0);
    EXPECT_EQ(full.upsilon, m(2));
}

TEST(Step, AllOptimalChangesNothing) {
    Book b = make_book({"X", "Y"}, 1, 1, 0.1);
    TreasuryReserve tr{m(10), m(10), {}};
    for (int i = 0; i < 50; ++i) {
        auto ev = auction_step(b.book, b.params, {{"X", 5, 0.1, 0}, {"Y", -5, 0, 0.2}}, kTh, {2, 2, 2}, tr,
                               {i, true, true, 1});
        EXPECT_TRUE(ev.empty());
    }
    EXPECT_EQ(b.params["X"].a_rhs, 1.0);
    EXPECT_EQ(tr.balance, m(10));
}

TEST(Step, Band1ExpiryRaisesByLambda) {
    Book b = make_book({"X"}, 1, 0.5, 0.1);
    TreasuryReserve tr{m(100), m(100), {}};
    std::vector<int> fired_at;
    for (int i = 0; i < 10; ++i) {
        auto ev = auction_step(b.book, b.params, {{"X", 10, 0.4, 0}}, kTh, {2, 1, 1}, tr, {i, true, true, 1});
        for (const auto& e : ev) {
            EXPECT_EQ(e.comparison, Comparison::too_slow);
            EXPECT_DOUBLE_EQ(e.a_after - e.a_before, 0.5);
            EXPECT_EQ(e.upsilon, m(10 * 0.5 * 0.1));
            fired_at.push_back(i);
        }
    }
    EXPECT_EQ(fired_at, (std::vector<int>{2, 5, 8}));
    EXPECT_DOUBLE_EQ(b.params["X"].a_rhs, 2.5);
    EXPECT_EQ(tr.balance, m(100 - 1.5));
    EXPECT_EQ(tr.balance, tr.cumulative_xi - tr.cumulative_upsilon);
}

TEST(Step, ContentionGoesByAscendingId) {
    Book b = make_book({"B", "A"}, 1, 1, 0.1);
    TreasuryReserve tr{m(1.5), m(1.5), {}};
    std::vector<AuctionEvent> all;
    for (int i = 0; i < 3; ++i) {
        auto ev = auction_step(b.book, b.params, {{"B", 10, 0.4, 0}, {"A", 10, 0.4, 0}}, kTh, {2, 1, 1}, tr,
                               {i, true, true, 1});
        all.insert(all.end(), ev.begin(), ev.end());
    }
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].asset, "A");
    EXPECT_FALSE(all[0].capped);
    EXPECT_DOUBLE_EQ(b.params["A"].a_rhs, 2.0);
    EXPECT_EQ(all[1].asset, "B");
    EXPECT_TRUE(all[1].capped);
    EXPECT_NEAR(b.params["B"].a_rhs, 1.5, 1e-12);
    EXPECT_TRUE(tr.balance.is_zero());
}

TEST(Step, BoundaryCheckBackInBandWaitsForNextStep) {
    Book b = make_book({"X"}, 1, 0.5, 0.1);
    TreasuryReserve tr{m(10), m(10), {}};
    RebalanceTargets tg{1, 1, 1};
    for (int i = 0; i < 4; ++i) auction_step(b.book, b.params, {{"X", 10, 0.4, 0}}, kTh, tg, tr, {i, false, true, 1});
    // epoch pass without advancing; utilisation already back under theta0
    auto ev = auction_step(b.book, b.params, {{"X", 10, 0.1, 0}}, kTh, tg, tr, {4, true, false, 1});
    EXPECT_TRUE(ev.empty());
    EXPECT_EQ(b.book["X"].rhs.breach_clock, 4);
    ev = auction_step(b.book, b.params, {{"X", 10, 0.1, 0}}, kTh, tg, tr, {5, false, true, 1});
    ASSERT_TRUE(ev.empty());
    EXPECT_EQ(b.book["X"].rhs.breach_clock, 0);
    EXPECT_EQ(b.book["X"].rhs.last_measured, 4);
}

TEST(Step, FastResolutionLowersAndRefunds) {
    Book b = make_book({"X"}, 3, 1, 0.1);
    TreasuryReserve tr{m(0), m(0), {}};
    auction_step(b.book, b.params, {{"X", 10, 0.4, 0}}, kTh, {5, 3, 2}, tr, {0, false, true, 10});
    auto ev = auction_step(b.book, b.params, {{"X", 10, 0.1, 0}}, kTh, {5, 3, 2}, tr, {1, false, true, 10});
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].comparison, Comparison::too_fast);
    EXPECT_DOUBLE_EQ(b.params["X"].a_rhs, 2.0);
    EXPECT_EQ(ev[0].upsilon, m(-1));
    EXPECT_EQ(tr.balance, m(1));
}

TEST(Property, FloorHoldsAndPairsCancel) {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> d(0, 1);
    Book b = make_book({"X", "Y"}, 2, 0.25, 0.05);
    for (auto& [id, a] : b.book) a.rhs.a_min = a.lhs.a_min = 1.0;
    TreasuryReserve tr{m(30), m(30), {}};
    for (int i = 0; i < 100000; ++i) {
        double tx = 40 * (d(g) - 0.5), ty = 40 * (d(g) - 0.5);
        std::vector<AuctionInput> in{{"X", tx, tx > 0 ? d(g) : 0, tx < 0 ? d(g) : 0},
                                     {"Y", ty, ty > 0 ? d(g) : 0, ty < 0 ? d(g) : 0}};
        auction_step(b.book, b.params, in, kTh, {3, 2, 2}, tr, {i, i % 5 == 4, true, 5});
        for (const auto& [id, a] : b.book) {
            ASSERT_GE(a.rhs.a, 1.0);
            ASSERT_GE(a.lhs.a, 1.0);
        }
        ASSERT_FALSE(tr.balance.is_negative());
        ASSERT_EQ(tr.balance, tr.cumulative_xi - tr.cumulative_upsilon);
    }

    SideAuction s = side(4, 0.5, 0);
    for (int k = 0; k < 20; ++k) {
        auto up = update_aggressiveness(s, 7, Comparison::too_slow, 0.1, m(1e6));
        s.a = up.a_after;
        auto dn = update_aggressiveness(s, 7, Comparison::too_fast, 0.1, m(0));
        s.a = dn.a_after;
        EXPECT_NEAR(s.a, 4.0, 0.5 + 1e-12);
    }
}
