#pragma once

// External liquidity density function (ELDF): a quadratic price density over
// cumulative volume, fitted per slot from aggregated venue depth. Integrating it
// converts asset volume into accounting-asset value; inverting the integral
// converts value back into volume.

#include "dfmm/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dfmm {

enum class Side { bid, ask, combined };

constexpr const char* to_string(Side s) {
    switch (s) {
    case Side::bid: return "bid";
    case Side::ask: return "ask";
    case Side::combined: return "combined";
    }
    return "?";
}

// Behaviour outside the fitted volume range. Clamp freezes the density at the
// nearest boundary value; polynomial tails are never evaluated.
enum class Extrapolation { reject, clamp };

struct CurvePoint {
    double volume = 0.0; // cumulative asset units
    double price = 0.0;  // $S per asset unit
};

struct Eldf {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    Side side = Side::combined;
    std::uint64_t slot_id = 0;
    double v_lo = 0.0;
    double v_hi = 0.0;
    Extrapolation extrapolation = Extrapolation::reject;

    double density(double v) const { return (c2 * v + c1) * v + c0; }
};

namespace detail {

inline bool density_positive_on(double c2, double c1, double c0, double lo, double hi) {
    auto p = [&](double v) { return (c2 * v + c1) * v + c0; };
    if (!(p(lo) > 0.0) || !(p(hi) > 0.0)) return false;
    if (c2 != 0.0) {
        double vertex = -c1 / (2.0 * c2);
        if (vertex > lo && vertex < hi && !(p(vertex) > 0.0)) return false;
    }
    return true;
}

// Antiderivative difference on an interval inside the polynomial's domain,
// written in factored form to limit cancellation.
inline double poly_area(const Eldf& c, double a, double b) {
    double w = b - a;
    return w * (c.c2 * (b * b + a * b + a * a) / 3.0 + c.c1 * (a + b) / 2.0 + c.c0);
}

// Solves a 3x3 system in place with partial pivoting.
inline std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 4>, 3> m) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (m[piv][col] == 0.0) return std::nullopt;
        std::swap(m[piv], m[col]);
        for (int r = col + 1; r < 3; ++r) {
            double f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = m[r][3];
        for (int k = r + 1; k < 3; ++k) s -= m[r][k] * x[k];
        x[r] = s / m[r][r];
    }
    return x;
}

// Real roots of a·x³ + b·x² + c·x + d, unsorted. Degenerate leading terms fall
// back to the quadratic and linear formulas.
inline std::vector<double> real_roots_cubic(double a, double b, double c, double d) {
    std::vector<double> roots;
    double scale = std::max({std::abs(b), std::abs(c), std::abs(d), 1e-300});
    if (std::abs(a) <= 1e-14 * scale) {
        if (std::abs(b) <= 1e-14 * std::max({std::abs(c), std::abs(d), 1e-300})) {
            if (c != 0.0) roots.push_back(-d / c);
            return roots;
        }
        double disc = c * c - 4.0 * b * d;
        if (disc < 0.0) return roots;
        double sq = std::sqrt(disc);
        double q = -0.5 * (c + (c >= 0.0 ? sq : -sq));
        if (q != 0.0) roots.push_back(d / q);
        roots.push_back(q / b);
        return roots;
    }
    // depressed cubic t³ + p·t + q with x = t − b/(3a)
    double bn = b / a, cn = c / a, dn = d / a;
    double shift = bn / 3.0;
    double p = cn - bn * bn / 3.0;
    double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sq);
        double v = std::cbrt(-q / 2.0 - sq);
        roots.push_back(u + v - shift);
    } else if (p == 0.0) {
        roots.push_back(-shift);
    } else {
        double r = std::sqrt(-p / 3.0);
        double arg = std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0);
        double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k) {
            roots.push_back(2.0 * r * std::cos((phi - 2.0 * M_PI * k) / 3.0) - shift);
        }
    }
    return roots;
}

} // namespace detail

/// Builds a curve from coefficients and checks the positive-density invariant.
inline Eldf make_eldf(double c2, double c1, double c0, double v_lo, double v_hi, Side side = Side::combined,
                      std::uint64_t slot_id = 0, Extrapolation extrapolation = Extrapolation::reject) {
    if (!(v_lo < v_hi) || !std::isfinite(v_lo) || !std::isfinite(v_hi) || v_lo < 0.0) {
        fail(ErrorCode::InvalidPoint, "curve domain must be a nonempty nonnegative interval");
    }
    if (!detail::density_positive_on(c2, c1, c0, v_lo, v_hi)) {
        fail(ErrorCode::NonPositiveDensity, "density must stay positive over the fit domain");
    }
    return Eldf{c2, c1, c0, side, slot_id, v_lo, v_hi, extrapolation};
}

/// Least-squares quadratic fit of price density against cumulative volume.
inline Eldf fit_eldf(std::span<const CurvePoint> points, int degree = 2, Side side = Side::combined,
                     std::uint64_t slot_id = 0) {
    if (degree != 2) fail(ErrorCode::UnsupportedDegree, "only degree 2 is supported");
    if (points.size() < static_cast<std::size_t>(degree + 1)) {
        fail(ErrorCode::TooFewPoints, std::to_string(points.size()) + " points for a degree-2 fit on side " +
                                          to_string(side));
    }
    double vmax = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.volume) || !std::isfinite(p.price) || p.volume < 0.0 || !(p.price > 0.0)) {
            fail(ErrorCode::InvalidPoint, "point " + std::to_string(i) + " needs volume >= 0 and price > 0");
        }
        if (i > 0 && !(p.volume > points[i - 1].volume)) {
            fail(ErrorCode::NonMonotoneVolumes, "volumes must be strictly increasing at point " + std::to_string(i));
        }
        vmax = std::max(vmax, p.volume);
    }
    double s = vmax > 0.0 ? vmax : 1.0;

    // normal equations on the scaled basis {1, v/s, (v/s)²}
    std::array<std::array<double, 4>, 3> m{};
    for (const auto& p : points) {
        double x = p.volume / s;
        std::array<double, 3> basis{1.0, x, x * x};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
            m[r][3] += basis[r] * p.price;
        }
    }
    auto sol = detail::solve3(m);
    if (!sol) fail(ErrorCode::TooFewPoints, "degenerate point set");
    double c0 = (*sol)[0];
    double c1 = (*sol)[1] / s;
    double c2 = (*sol)[2] / (s * s);
    double lo = points.front().volume;
    double hi = points.back().volume;
    if (!detail::density_positive_on(c2, c1, c0, lo, hi)) {
        fail(ErrorCode::NonPositiveDensity, std::string("fitted ") + to_string(side) + " curve dips to <= 0");
    }
    return Eldf{c2, c1, c0, side, slot_id, lo, hi, Extrapolation::reject};
}

inline Eldf fit_eldf(const std::vector<CurvePoint>& points, int degree = 2, Side side = Side::combined,
                     std::uint64_t slot_id = 0) {
    return fit_eldf(std::span<const CurvePoint>(points), degree, side, slot_id);
}

inline double eval_eldf(const Eldf& curve, double v) {
    if (v >= curve.v_lo && v <= curve.v_hi) return curve.density(v);
    if (curve.extrapolation == Extrapolation::clamp && v >= 0.0 && std::isfinite(v)) {
        return curve.density(v < curve.v_lo ? curve.v_lo : curve.v_hi);
    }
    fail(ErrorCode::OutOfDomain, "volume " + std::to_string(v) + " outside [" + std::to_string(curve.v_lo) + ", " +
                                     std::to_string(curve.v_hi) + "]");
}

namespace detail {
inline void check_volume(const Eldf& curve, double v) {
    bool in = v >= curve.v_lo && v <= curve.v_hi;
    bool clampable = curve.extrapolation == Extrapolation::clamp && v >= 0.0 && std::isfinite(v);
    if (!in && !clampable) {
        fail(ErrorCode::OutOfDomain, "volume " + std::to_string(v) + " outside [" + std::to_string(curve.v_lo) +
                                         ", " + std::to_string(curve.v_hi) + "]");
    }
}
} // namespace detail

/// Area under the density between two volumes: the $S value of trading v2 − v1
/// units starting at cumulative volume v1.
inline double integrate_eldf(const Eldf& curve, double v1, double v2) {
    if (v1 > v2) fail(ErrorCode::ReversedInterval, "integration bounds reversed");
    detail::check_volume(curve, v1);
    detail::check_volume(curve, v2);
    double total = 0.0;
    double a = v1;
    if (a < curve.v_lo) {
        double b = std::min(v2, curve.v_lo);
        total += curve.density(curve.v_lo) * (b - a);
        a = b;
    }
    double inner_hi = std::min(v2, curve.v_hi);
    if (inner_hi > a) {
        total += detail::poly_area(curve, a, inner_hi);
        a = inner_hi;
    }
    if (v2 > a) total += curve.density(curve.v_hi) * (v2 - a);
    return total;
}

/// Smallest volume v2 >= v1 whose integral from v1 reaches target_value.
inline double solve_volume_for_value(const Eldf& curve, double v1, double target_value) {
    if (!(target_value >= 0.0) || !std::isfinite(target_value)) {
        fail(ErrorCode::NoFeasibleRoot, "target value must be finite and >= 0");
    }
    detail::check_volume(curve, v1);
    if (target_value == 0.0) return v1;

    double remaining = target_value;
    double start = v1;
    if (start < curve.v_lo) {
        double dens = curve.density(curve.v_lo);
        double flat = dens * (curve.v_lo - start);
        if (remaining <= flat) return start + remaining / dens;
        remaining -= flat;
        start = curve.v_lo;
    }
    double available = start < curve.v_hi ? detail::poly_area(curve, start, curve.v_hi) : 0.0;
    if (remaining > available) {
        if (curve.extrapolation == Extrapolation::clamp) {
            return std::max(start, curve.v_hi) + (remaining - available) / curve.density(curve.v_hi);
        }
        fail(ErrorCode::NoFeasibleRoot, "external book cannot source " + std::to_string(target_value) +
                                            " from volume " + std::to_string(v1));
    }

    // Closed form on the cubic c2/3 x³ + c1/2 x² + c0 x − [F(start) + remaining],
    // then a bracketed Newton polish on the monotone residual.
    double f_start = ((curve.c2 / 3.0 * start + curve.c1 / 2.0) * start + curve.c0) * start;
    auto roots = detail::real_roots_cubic(curve.c2 / 3.0, curve.c1 / 2.0, curve.c0, -(f_start + remaining));
    double lo = start;
    double hi = curve.v_hi;
    double width = hi - lo;
    std::optional<double> guess;
    for (double r : roots) {
        if (std::isfinite(r) && r >= lo - 1e-9 * std::max(1.0, width) && r <= hi + 1e-9 * std::max(1.0, width)) {
            double c = std::clamp(r, lo, hi);
            if (!guess || c < *guess) guess = c;
        }
    }
    double x = guess.value_or(0.5 * (lo + hi));
    double tol = 1e-14 * std::max(1.0, remaining);
    for (int iter = 0; iter < 200; ++iter) {
        double g = detail::poly_area(curve, start, x) - remaining;
        if (std::abs(g) <= tol) return x;
        if (g > 0.0) hi = x; else lo = x;
        double step_x = x - g / curve.density(x);
        x = (step_x > lo && step_x < hi) ? step_x : 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) return x;
    }
    fail(ErrorCode::SolverDivergence, "volume inversion did not converge");
}

enum class SnapshotMode { combined, split };

/// Fits one combined curve, or bid and ask curves split at the mid price. In
/// split mode a point quoted exactly at mid belongs to both sides.
inline std::vector<Eldf> snapshot_to_curves(std::span<const CurvePoint> raw, SnapshotMode mode, double mid = 0.0,
                                            std::uint64_t slot_id = 0) {
    if (raw.empty()) fail(ErrorCode::TooFewPoints, "empty snapshot");
    if (mode == SnapshotMode::combined) return {fit_eldf(raw, 2, Side::combined, slot_id)};
    std::vector<CurvePoint> bid, ask;
    for (const auto& p : raw) {
        if (p.price <= mid) bid.push_back(p);
        if (p.price >= mid) ask.push_back(p);
    }
    return {fit_eldf(bid, 2, Side::bid, slot_id), fit_eldf(ask, 2, Side::ask, slot_id)};
}

/// One venue's cumulative depth on one side, best price first.
struct VenueDepth {
    std::string venue_id;
    std::vector<CurvePoint> points;
};

/// Merges several venues' books for one side into a single cumulative curve:
/// level sizes are pooled and re-accumulated in best-price-first order.
inline std::vector<CurvePoint> aggregate_venues(std::span<const VenueDepth> venues, Side side) {
    struct Level {
        double price;
        double size;
    };
    std::vector<Level> levels;
    double best = side == Side::ask ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& venue : venues) {
        double prev_v = 0.0;
        for (const auto& p : venue.points) {
            double size = p.volume - prev_v;
            if (size < 0.0) fail(ErrorCode::NonMonotoneVolumes, "venue " + venue.venue_id + " depth not cumulative");
            if (size > 0.0) levels.push_back({p.price, size});
            prev_v = p.volume;
            best = side == Side::ask ? std::min(best, p.price) : std::max(best, p.price);
        }
    }
    if (levels.empty()) return {};
    std::stable_sort(levels.begin(), levels.end(), [side](const Level& a, const Level& b) {
        return side == Side::ask ? a.price < b.price : a.price > b.price;
    });
    std::vector<CurvePoint> out;
    out.push_back({0.0, best});
    double cum = 0.0;
    for (const auto& l : levels) {
        cum += l.size;
        if (!out.empty() && out.back().price == l.price && out.size() > 1) {
            out.back().volume = cum;
        } else {
            out.push_back({cum, l.price});
        }
    }
    return out;
}

} // namespace dfmm
