#pragma once

// Synthetic external market: a lognormal mid per asset plus a few venues whose
// depth is quadratic in volume around the mid.

#include "dfmm/eldf.hpp"
#include "dfmm/ledger.hpp"
#include "dfmm/metrics.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dfmm::sim {

struct AssetMarket {
    AssetId id;
    double mid = 1.0;
    double sigma = 0.0;
    double drift = 0.0;
    double impact = 0.0; // α, price change per unit of net external flow
    double spread = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    int venues = 1;
    double jitter = 0.0;
    double depth = 1.0;
    int points = 8;
    double pending_flow = 0.0; // net units bought externally since the last step
};

struct ExternalMarket {
    std::vector<AssetMarket> assets;

    AssetMarket* find(const AssetId& id) {
        for (auto& a : assets) {
            if (a.id == id) return &a;
        }
        return nullptr;
    }
    const AssetMarket* find(const AssetId& id) const {
        for (const auto& a : assets) {
            if (a.id == id) return &a;
        }
        return nullptr;
    }
};

inline ExternalMarket make_market(const ScenarioConfig& c) {
    ExternalMarket m;
    for (const auto& a : c.assets) {
        m.assets.push_back(AssetMarket{a.id, a.mid, a.sigma, a.drift, a.impact, a.spread, a.kappa1, a.kappa2,
                                       a.venues, a.jitter, a.depth, a.points, 0.0});
    }
    return m;
}

struct AssetSnapshot {
    AssetId id;
    double mid = 0.0;
    std::vector<VenueDepth> bids;
    std::vector<VenueDepth> asks;
};

// Mid floor so impact can never push a price to zero.
inline constexpr double kMidFloor = 1e-9;

inline std::vector<AssetSnapshot> sample_venues(const ExternalMarket& m, Rng& rng) {
    std::vector<AssetSnapshot> out;
    for (const auto& a : m.assets) {
        AssetSnapshot s{a.id, a.mid, {}, {}};
        for (int j = 0; j < a.venues; ++j) {
            double wob = 1.0 + a.jitter * (2.0 * rng.uniform() - 1.0);
            double h = a.spread * wob, k1 = a.kappa1 * wob, k2 = a.kappa2 * wob;
            VenueDepth bid{"v" + std::to_string(j), {}};
            VenueDepth ask{"v" + std::to_string(j), {}};
            for (int i = 0; i <= a.points; ++i) {
                double v = a.depth * static_cast<double>(i) / static_cast<double>(a.points);
                double skew = h + k1 * v + k2 * v * v;
                bid.points.push_back({v, a.mid * (1.0 - skew)});
                ask.points.push_back({v, a.mid * (1.0 + skew)});
            }
            s.bids.push_back(std::move(bid));
            s.asks.push_back(std::move(ask));
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// One external step: pending impact, then a lognormal return, then fresh venue depth.
inline std::vector<AssetSnapshot> step_external(ExternalMarket& m, Rng& rng) {
    for (auto& a : m.assets) {
        a.mid = std::max(a.mid + market_impact(a.impact, a.pending_flow), kMidFloor);
        a.pending_flow = 0.0;
        double z = rng.normal();
        if (a.sigma > 0.0 || a.drift != 0.0) a.mid *= std::exp(a.drift + a.sigma * z - 0.5 * a.sigma * a.sigma);
        a.mid = std::max(a.mid, kMidFloor);
    }
    return sample_venues(m, rng);
}

} // namespace dfmm::sim
