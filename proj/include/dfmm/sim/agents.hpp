#pragma once

// Exogenous traders and the arbitrageur. Both trade through the same
// quote/execute path; the arbitrageur hedges each fill on the external venues.

#include "dfmm/ledger.hpp"
#include "dfmm/pricing.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace dfmm::sim {

struct TradeIntent {
    AssetId asset_in;
    AssetId asset_out;
    double v_in = 0.0;
};

/// Poisson arrivals with lognormal sizes. Pairs are drawn uniformly unless a
/// preferred asset to buy is configured.
inline std::vector<TradeIntent> draw_trader_flow(const TraderConfig& tc, const std::vector<AssetId>& ids, Rng& rng) {
    std::vector<TradeIntent> out;
    if (tc.mode != "poisson" || ids.size() < 2) return out;
    std::int64_t n = rng.poisson(tc.rate);
    for (std::int64_t i = 0; i < n; ++i) {
        std::size_t a = rng.below(ids.size());
        std::size_t b = (a + 1 + rng.below(ids.size() - 1)) % ids.size();
        double pick = rng.uniform();
        if (!tc.prefer_out.empty() && pick < tc.preference) {
            auto it = std::find(ids.begin(), ids.end(), tc.prefer_out);
            b = static_cast<std::size_t>(it - ids.begin());
            if (a == b) a = (b + 1 + rng.below(ids.size() - 1)) % ids.size();
        }
        double size = std::exp(tc.size_mu + tc.size_sigma * rng.normal());
        out.push_back({ids[a], ids[b], size});
    }
    return out;
}

struct ArbitrageurAgent {
    std::string id = "arb";
    double fixed_cost = 0.0;
    double haircut = 0.0; // υ
    double max_exposure = 1e12;
};

/// Expected payoff after haircut and fixed cost; the agent acts only when > 0.
inline double arb_net_payoff(double gap_value, double haircut, double fixed_cost) {
    return gap_value * (1.0 - haircut) - fixed_cost;
}

struct ArbDecision {
    TradeIntent intent;
    SwapQuote quote;
    double gap_value = 0.0; // external proceeds of v_out minus external cost of v_in
    double net_payoff = 0.0;
    double external_cost = 0.0;
};

/// External round trip for a candidate: buy v_in on the venues' ask, sell the
/// pool's v_out on their bid.
inline double arb_gap_value(const SwapQuote& q, const CurveBook& external, double* cost_out = nullptr) {
    const auto& in = curves_for(external, q.asset_in);
    const auto& out = curves_for(external, q.asset_out);
    double cost = integrate_eldf(in.ask, 0.0, q.v_in.to_double());
    double proceeds = integrate_eldf(out.bid, 0.0, q.v_out.to_double());
    if (cost_out) *cost_out = cost;
    return proceeds - cost;
}

/// Sells the most deficit asset into the pool for the most surplus asset,
/// sized so V' closes as much of the imbalance as both legs allow without
/// crossing zero. Returns nothing unless some size pays strictly more than
/// the agent's costs.
inline std::optional<ArbDecision> arbitrageur_decide(const ArbitrageurAgent& agent, const BalanceSheet& sheet,
                                                     const CurveBook& pricing, const CurveBook& external,
                                                     const ParamBook& params, const FeeSchedule& fees,
                                                     const CapacityBook* caps) {
    const auto& assets = sheet.assets();
    if (assets.size() < 2) return std::nullopt;
    const AssetId* hi_id = nullptr;
    const AssetId* lo_id = nullptr;
    Money hi_t, lo_t;
    for (const auto& [id, st] : assets) {
        if (!hi_id || st.synthetic.t > hi_t) {
            hi_id = &id;
            hi_t = st.synthetic.t;
        }
        if (!lo_id || st.synthetic.t < lo_t) {
            lo_id = &id;
            lo_t = st.synthetic.t;
        }
    }
    if (*hi_id == *lo_id) return std::nullopt;
    double t_in = hi_t.to_double();
    double t_out = lo_t.to_double();
    double target;
    if (t_in > 0.0 && t_out < 0.0) target = std::min(t_in, -t_out);
    else if (t_in > 0.0) target = t_in;
    else if (t_out < 0.0) target = -t_out;
    else return std::nullopt;

    auto quote = [&](double v) -> std::optional<SwapQuote> {
        try {
            return quote_swap(*hi_id, *lo_id, Units::from_double(v), sheet, pricing, params, fees, caps);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    // largest v_in whose quote exists and keeps V' at or below the target
    auto fits = [&](double v) {
        auto qv = quote(v);
        return qv && qv->v_prime_raw <= target;
    };
    double lo = 0.0;
    double hi = std::max(target, 1e-9);
    for (int i = 0; i < 60 && fits(hi); ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    double full = lo;
    if (!(full > 0.0)) return std::nullopt;

    std::optional<ArbDecision> best;
    for (double frac : {1.0, 0.5, 0.25, 0.125}) {
        double v = full * frac;
        auto qf = quote(v);
        if (!qf) continue;
        ArbDecision d;
        try {
            d.gap_value = arb_gap_value(*qf, external, &d.external_cost);
        } catch (const Error&) {
            continue;
        }
        if (d.external_cost > agent.max_exposure) continue;
        d.net_payoff = arb_net_payoff(d.gap_value, agent.haircut, agent.fixed_cost);
        if (!(d.net_payoff > 0.0)) continue;
        d.intent = {*hi_id, *lo_id, v};
        d.quote = *qf;
        if (!best || d.net_payoff > best->net_payoff) best = d;
    }
    return best;
}

} // namespace dfmm::sim
