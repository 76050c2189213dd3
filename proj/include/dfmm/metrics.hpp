#pragma once

// Market-quality diagnostics: impermanent loss, liquidity in a price band,
// concentration rate, slippage and linear market impact.

#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dfmm {

struct MetricSample {
    std::int64_t timestep = 0;
    std::string metric_id;
    std::string context;
    double value = 0.0;
};

/// LP value relative to holding after the price moves from p0 to p1.
inline double impermanent_loss(double p0, double p1) {
    if (!(p0 > 0.0) || !(p1 > 0.0)) fail(ErrorCode::NonPositivePrice, "prices must be positive");
    double r = p1 / p0;
    return std::sqrt(r) - (r + 1.0) / 2.0;
}

struct PriceLevel {
    double price = 0.0;
    double volume = 0.0;
};

/// Discrete book: volume of levels with p_lo <= price <= p_hi.
inline double liquidity_between(std::span<const PriceLevel> levels, double p_lo, double p_hi) {
    if (p_lo > p_hi) fail(ErrorCode::ReversedBounds, "p_lo > p_hi");
    double sum = 0.0;
    for (const auto& l : levels) {
        if (l.price >= p_lo && l.price <= p_hi) sum += l.volume;
    }
    return sum;
}

/// Volume density over price, V(p) = c2 p² + c1 p + c0.
struct VolumeDensity {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

inline double liquidity_between(const VolumeDensity& v, double p_lo, double p_hi) {
    if (p_lo > p_hi) fail(ErrorCode::ReversedBounds, "p_lo > p_hi");
    auto prim = [&](double p) { return ((v.c2 / 3.0 * p + v.c1 / 2.0) * p + v.c0) * p; };
    return prim(p_hi) - prim(p_lo);
}

/// ELDF: measure of the volumes on the curve's domain where the marginal
/// price lies in [p_lo, p_hi].
inline double liquidity_between(const Eldf& curve, double p_lo, double p_hi) {
    if (p_lo > p_hi) fail(ErrorCode::ReversedBounds, "p_lo > p_hi");
    std::vector<double> cuts{curve.v_lo, curve.v_hi};
    for (double p : {p_lo, p_hi}) {
        double a = curve.c2, b = curve.c1, c = curve.c0 - p;
        if (a == 0.0) {
            if (b != 0.0) cuts.push_back(-c / b);
        } else {
            double disc = b * b - 4.0 * a * c;
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
                cuts.push_back(q / a);
                if (q != 0.0) cuts.push_back(c / q);
            }
        }
    }
    std::vector<double> inside;
    for (double x : cuts) {
        if (x >= curve.v_lo && x <= curve.v_hi) inside.push_back(x);
    }
    std::sort(inside.begin(), inside.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
        double m = 0.5 * (inside[i] + inside[i + 1]);
        double p = curve.density(m);
        if (p >= p_lo && p <= p_hi) total += inside[i + 1] - inside[i];
    }
    return total;
}

struct LiquidityLevel {
    double liquidity = 0.0;
    double price = 0.0;
};

inline double concentration_rate(std::span<const LiquidityLevel> levels, double p_market) {
    double num = 0.0, den = 0.0;
    for (const auto& l : levels) {
        num += l.liquidity;
        den += l.liquidity * std::abs(l.price - p_market);
    }
    if (!(den > 0.0)) fail(ErrorCode::DegenerateAllAtMarket, "every level sits at the market price");
    return num / den;
}

inline double slippage(double expected, double executed) { return expected - executed; }

inline double market_impact(double alpha, double v) { return alpha * v; }

} // namespace dfmm
