#pragma once

// Rebalancing-premium pricing. A trade sells asset_in at its external bid curve
// for v_s $S, then solves the balance
//
//   V' + ΔR_in + ΔR_out + θ·v_s = v_s
//
// for the adjusted notional V' that moves between the two synthetic pools. The
// sold leg's T falls by V' and the bought leg's T rises by V'; ΔR is the
// change of each leg's premium function, charged to the trader when |T| grows
// and rebated when it shrinks.

#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/ledger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace dfmm {

struct RebalanceParams {
    double a_rhs = 0.0; // aggressiveness, T >= 0
    double a_lhs = 0.0; // aggressiveness, T < 0
    double d_rhs = 0.0; // cover coefficient, T >= 0
    double d_lhs = 0.0; // cover coefficient, T < 0
};

struct FeeSchedule {
    double theta = 0.0; // AMM fee rate
    double xi = 0.0;    // treasury share of theta

    bool valid() const { return theta >= 0.0 && theta < 1.0 && xi >= 0.0 && xi <= theta; }
};

using ParamBook = std::map<AssetId, RebalanceParams>;

/// Premium available at imbalance t: t(t + A)·D on the right, −t(−t + A)·D on the left.
inline double premium_fn(double t, const RebalanceParams& p) {
    if (t >= 0.0) return t * (t + p.a_rhs) * p.d_rhs;
    return -t * (-t + p.a_lhs) * p.d_lhs;
}

inline Money premium_value(Money t, const RebalanceParams& p) {
    return Money::from_double(premium_fn(t.to_double(), p));
}

/// Trader cost of moving T from t_prev to t_next: positive when |T| grows.
inline double rp_delta(double t_prev, double t_next, const RebalanceParams& p) {
    return premium_fn(t_next, p) - premium_fn(t_prev, p);
}

// Each endpoint is rounded before differencing, so a path that returns T to
// its start nets to exactly zero.
inline Money rp_delta(Money t_prev, Money t_next, const RebalanceParams& p) {
    return premium_value(t_next, p) - premium_value(t_prev, p);
}

// Which legs cross T = 0 as V' grows from 0.
enum class CrossingCase {
    none,    // sold leg starts <= 0, bought leg starts >= 0
    in_leg,  // sold leg starts > 0
    out_leg, // bought leg starts < 0
    both,
};

constexpr const char* to_string(CrossingCase c) {
    switch (c) {
    case CrossingCase::none: return "none";
    case CrossingCase::in_leg: return "in_leg";
    case CrossingCase::out_leg: return "out_leg";
    case CrossingCase::both: return "both";
    }
    return "?";
}

struct AdjustedNotional {
    double v_prime = 0.0;
    CrossingCase crossing = CrossingCase::none;
    int segment = 0;          // index of the piece the root falls in
    bool on_boundary = false; // root sits exactly where a leg reaches T = 0
};

namespace detail {

// Quadratic piece of premium_fn on one side: d·t² ± d·A·t.
struct PremiumPiece {
    double d;
    double lin; // ±d·A
    double at(double t) const { return (d * t + lin) * t; }
};

inline PremiumPiece piece_for(const RebalanceParams& p, bool rhs) {
    return rhs ? PremiumPiece{p.d_rhs, p.d_rhs * p.a_rhs} : PremiumPiece{p.d_lhs, -p.d_lhs * p.a_lhs};
}

inline double trade_balance(double v, double v_s, double theta, double t_in, double t_out,
                            const RebalanceParams& in, const RebalanceParams& out) {
    return v + rp_delta(t_in, t_in - v, in) + rp_delta(t_out, t_out + v, out) + theta * v_s - v_s;
}

} // namespace detail

/// Solves the trade balance for V' by walking the pieces between the points
/// where either leg's T crosses zero. The balance is convex in V' and negative
/// at V' = 0, so exactly one nonnegative root exists.
inline AdjustedNotional solve_adjusted_notional(double v_s, double theta, double t_in, double t_out,
                                                const RebalanceParams& in, const RebalanceParams& out) {
    if (!(v_s > 0.0) || !(theta >= 0.0 && theta < 1.0)) {
        fail(ErrorCode::NoFeasibleSolution, "need v_s > 0 and 0 <= theta < 1");
    }
    if (in.d_rhs < 0 || in.d_lhs < 0 || out.d_rhs < 0 || out.d_lhs < 0) {
        fail(ErrorCode::NoFeasibleSolution, "cover coefficients must be nonnegative");
    }
    AdjustedNotional res;
    bool in_cross = t_in > 0.0;
    bool out_cross = t_out < 0.0;
    res.crossing = in_cross ? (out_cross ? CrossingCase::both : CrossingCase::in_leg)
                            : (out_cross ? CrossingCase::out_leg : CrossingCase::none);

    std::vector<double> breaks;
    if (in_cross) breaks.push_back(t_in);
    if (out_cross) breaks.push_back(-t_out);
    std::sort(breaks.begin(), breaks.end());

    auto f = [&](double v) { return detail::trade_balance(v, v_s, theta, t_in, t_out, in, out); };

    double lo = 0.0;
    for (std::size_t seg = 0; seg <= breaks.size(); ++seg) {
        double hi = seg < breaks.size() ? breaks[seg] : std::numeric_limits<double>::infinity();
        if (seg < breaks.size()) {
            double fb = f(hi);
            if (fb == 0.0) {
                res.v_prime = hi;
                res.segment = static_cast<int>(seg);
                res.on_boundary = true;
                return res;
            }
            if (fb < 0.0) {
                lo = hi;
                continue;
            }
        }
        // root lies in (lo, hi): write the balance as a·V² + b·V + c there
        double mid = std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 1.0;
        auto pin = detail::piece_for(in, t_in - mid >= 0.0);
        auto pout = detail::piece_for(out, t_out + mid >= 0.0);
        double a = pin.d + pout.d;
        double b = 1.0 - 2.0 * pin.d * t_in - pin.lin + 2.0 * pout.d * t_out + pout.lin;
        double c = pin.at(t_in) - premium_fn(t_in, in) + pout.at(t_out) - premium_fn(t_out, out) + theta * v_s - v_s;

        double root = std::numeric_limits<double>::quiet_NaN();
        if (a == 0.0) {
            if (b > 0.0) root = -c / b;
        } else {
            double disc = b * b - 4.0 * a * c;
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
                double r1 = q / a;
                double r2 = q != 0.0 ? c / q : r1;
                root = std::max(r1, r2);
            }
        }
        double upper = std::isfinite(hi) ? hi : std::numeric_limits<double>::max();
        if (!std::isfinite(root) || root < lo || root > upper) {
            // rounding pushed the closed form off the piece: bracket and bisect
            double blo = lo;
            double bhi = std::isfinite(hi) ? hi : std::max(1.0, lo) * 2.0;
            while (!std::isfinite(hi) && f(bhi) <= 0.0) bhi *= 2.0;
            for (int i = 0; i < 400 && bhi - blo > 0.0; ++i) {
                double m = 0.5 * (blo + bhi);
                if (m == blo || m == bhi) break;
                (f(m) > 0.0 ? bhi : blo) = m;
            }
            root = 0.5 * (blo + bhi);
        } else {
            // one Newton polish on the piece's own polynomial
            double deriv = 2.0 * a * root + b;
            if (deriv > 0.0) {
                double polished = root - ((a * root + b) * root + c) / deriv;
                if (polished >= lo && polished <= upper) root = polished;
            }
        }
        res.v_prime = root;
        res.segment = static_cast<int>(seg);
        return res;
    }
    fail(ErrorCode::NoFeasibleSolution, "no nonnegative root");
}

/// Per-asset inventory bounds the vaults can hedge.
struct Capacity {
    Units max_surplus = Units::from_raw(std::numeric_limits<int128>::max() / 4); // I − I_LP
    Units max_deficit = Units::from_raw(std::numeric_limits<int128>::max() / 4); // I_LP − I
};

using CapacityBook = std::map<AssetId, Capacity>;

struct SwapQuote {
    AssetId asset_in;
    AssetId asset_out;
    Units v_in;
    Money v_s;
    Money v_prime_s;
    Money rp_in;  // sold leg (exported as rp_x)
    Money rp_out; // bought leg (exported as rp_y)
    Money fee;
    Money t_in_after;
    Money t_out_after;
    Units v_out;
    double v_prime_raw = 0.0; // unrounded solver output
    CrossingCase crossing = CrossingCase::none;
    std::uint64_t state_version = 0;
};

namespace detail {
inline const RebalanceParams& params_for(const ParamBook& params, const AssetId& id) {
    auto it = params.find(id);
    if (it == params.end()) fail(ErrorCode::UnknownAsset, "no rebalance parameters for " + id);
    return it->second;
}

inline const AssetCurves& pricing_curves(const CurveBook& book, const AssetId& id) {
    auto it = book.find(id);
    if (it == book.end()) fail(ErrorCode::CurveUnavailable, "no curves for " + id);
    return it->second;
}
} // namespace detail

/// Prices selling v_in of asset_in for asset_out against the current state.
inline SwapQuote quote_swap(const AssetId& asset_in, const AssetId& asset_out, Units v_in, const BalanceSheet& sheet,
                            const CurveBook& curves, const ParamBook& params, const FeeSchedule& fees,
                            const CapacityBook* capacities = nullptr) {
    if (asset_in == asset_out) fail(ErrorCode::BadParams, "swap needs two distinct assets");
    if (!v_in.is_positive()) fail(ErrorCode::NonPositiveAmount, "v_in must be positive");
    if (!fees.valid()) fail(ErrorCode::BadRates, "fee schedule violates 0 <= xi <= theta < 1");
    const auto& st_in = sheet.asset(asset_in);
    const auto& st_out = sheet.asset(asset_out);
    const auto& c_in = detail::pricing_curves(curves, asset_in);
    const auto& c_out = detail::pricing_curves(curves, asset_out);
    const auto& p_in = detail::params_for(params, asset_in);
    const auto& p_out = detail::params_for(params, asset_out);

    SwapQuote q;
    q.asset_in = asset_in;
    q.asset_out = asset_out;
    q.v_in = v_in;
    q.state_version = sheet.version();

    double mark_in = st_in.slot.v_plus.to_double();
    q.v_s = Money::from_double(integrate_eldf(c_in.bid, mark_in, mark_in + v_in.to_double()));
    if (!q.v_s.is_positive()) fail(ErrorCode::NoFeasibleSolution, "trade too small to value");

    Money t_in = st_in.synthetic.t;
    Money t_out = st_out.synthetic.t;
    auto sol = solve_adjusted_notional(q.v_s.to_double(), fees.theta, t_in.to_double(), t_out.to_double(), p_in, p_out);
    q.v_prime_raw = sol.v_prime;
    q.crossing = sol.crossing;

    // Exact $S balance: fee absorbs rounding dust, never dropping below θ·v_s.
    Money fee_floor = Money::from_double(fees.theta * q.v_s.to_double());
    Money v_prime = max(Money::from_double(sol.v_prime), Money::zero());
    Money step = Money::from_raw(1);
    for (;;) {
        q.t_in_after = t_in - v_prime;
        q.t_out_after = t_out + v_prime;
        q.rp_in = rp_delta(t_in, q.t_in_after, p_in);
        q.rp_out = rp_delta(t_out, q.t_out_after, p_out);
        q.fee = q.v_s - v_prime - q.rp_in - q.rp_out;
        if (q.fee >= fee_floor || v_prime.is_zero()) break;
        v_prime = max(v_prime - step, Money::zero());
        step += step;
    }
    q.v_prime_s = v_prime;

    double mark_out = st_out.slot.v_minus.to_double();
    q.v_out = Units::from_double(
        solve_volume_for_value(c_out.ask, mark_out, q.v_prime_s.to_double()) - mark_out);
    if (q.v_out > st_out.pool.inventory) {
        fail(ErrorCode::InsufficientInventory, "pool " + asset_out + " cannot deliver the fill");
    }
    if (capacities) {
        auto check = [&](const AssetId& id, Units surplus_before, Units surplus_after) {
            auto it = capacities->find(id);
            if (it == capacities->end()) return;
            const Capacity& cap = it->second;
            if (surplus_after > surplus_before && surplus_after.is_positive() && surplus_after > cap.max_surplus) {
                fail(ErrorCode::ExceedsCapacity, "surplus on " + id + " exceeds long-vault capacity");
            }
            Units def_before = -surplus_before;
            Units def_after = -surplus_after;
            if (def_after > def_before && def_after.is_positive() && def_after > cap.max_deficit) {
                fail(ErrorCode::ExceedsCapacity, "deficit on " + id + " exceeds short-side capacity");
            }
        };
        Units open_in = open_inventory(st_in.pool);
        Units open_out = open_inventory(st_out.pool);
        check(asset_in, open_in, open_in + v_in);
        check(asset_out, open_out, open_out - q.v_out);
    }
    return q;
}

struct Fill {
    SwapQuote quote;
    Units v_out;
};

/// Commits a quote. The sheet must be at the exact version the quote was priced on.
inline Fill execute_swap(const SwapQuote& quote, BalanceSheet& sheet, const CurveBook& curves,
                         std::int64_t timestep = 0) {
    if (quote.state_version != sheet.version()) fail(ErrorCode::StaleQuote, "state changed since quoting");
    const auto& c_out = detail::pricing_curves(curves, quote.asset_out);
    double mark_out = sheet.asset(quote.asset_out).slot.v_minus.to_double();
    Units v_out = Units::from_double(solve_volume_for_value(c_out.ask, mark_out, quote.v_prime_s.to_double()) - mark_out);
    if (v_out > sheet.pool(quote.asset_out).inventory) {
        fail(ErrorCode::InsufficientInventory, "pool " + quote.asset_out + " cannot deliver the fill");
    }
    sheet.commit_swap(log_entry::Swap{timestep, quote.asset_in, quote.asset_out, quote.v_in, v_out, quote.v_s,
                                      quote.v_prime_s, quote.rp_in, quote.rp_out, quote.fee});
    return {quote, v_out};
}

} // namespace dfmm
