#pragma once

// Rebalancing premium auction. Each asset side keeps a clock of how long
// utilisation has been outside the optimal band. A deadline that expires raises
// aggressiveness by Λ (bounded by what the treasury can fund); a breach that
// clears faster than its target lowers it by Λ.

#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/pricing.hpp"
#include "dfmm/treasury.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dfmm {

enum class Regime { optimal = 0, band1 = 1, band2 = 2, critical = 3 };

constexpr const char* to_string(Regime r) {
    switch (r) {
    case Regime::optimal: return "optimal";
    case Regime::band1: return "band1";
    case Regime::band2: return "band2";
    case Regime::critical: return "critical";
    }
    return "?";
}

struct RegimeThresholds {
    double theta0 = 0.3;
    double theta_star = 0.6;
    double theta_dagger = 0.9;

    bool valid() const { return 0.0 <= theta0 && theta0 <= theta_star && theta_star <= theta_dagger && theta_dagger <= 1.0; }
};

struct RebalanceTargets {
    std::int64_t j_star = 10;  // epochs, band1
    std::int64_t j_prime = 5;  // epochs, band2
    std::int64_t j_dagger = 3; // timesteps, critical

    bool valid() const { return j_star >= j_prime && j_prime >= 1 && j_dagger >= 1; }
};

inline Regime classify_regime(double u, const RegimeThresholds& th) {
    if (u < th.theta0) return Regime::optimal;
    if (u < th.theta_star) return Regime::band1;
    if (u < th.theta_dagger) return Regime::band2;
    return Regime::critical;
}

struct Deadline {
    std::int64_t value = 0;
    bool in_timesteps = false; // otherwise epochs
};

inline Deadline target_for(Regime r, const RebalanceTargets& t) {
    switch (r) {
    case Regime::band1: return {t.j_star, false};
    case Regime::band2: return {t.j_prime, false};
    case Regime::critical: return {t.j_dagger, true};
    case Regime::optimal: break;
    }
    fail(ErrorCode::NoTargetInOptimal, "no rebalancing target inside the optimal band");
}

enum class PremiumSide { rhs, lhs };

constexpr const char* to_string(PremiumSide s) { return s == PremiumSide::rhs ? "rhs" : "lhs"; }

struct SideAuction {
    double a = 0.0;      // aggressiveness
    double lambda = 0.0; // Λ
    double a_min = 0.0;
    std::int64_t breach_clock = 0; // timesteps outside the optimal band
    std::int64_t anchor = 0;       // clock value when the current deadline started
    Regime peak = Regime::optimal; // worst regime seen in this breach
    std::optional<std::int64_t> last_measured;
};

struct AssetAuction {
    SideAuction rhs;
    SideAuction lhs;

    SideAuction& side(PremiumSide s) { return s == PremiumSide::rhs ? rhs : lhs; }
    const SideAuction& side(PremiumSide s) const { return s == PremiumSide::rhs ? rhs : lhs; }
};

using AuctionBook = std::map<AssetId, AssetAuction>;

struct Resolution {
    std::int64_t measured = 0; // timesteps
    Regime peak = Regime::optimal;
};

/// Advances one side's breach clock by one timestep. Returns the measured
/// rebalancing time when utilisation re-enters the optimal band.
inline std::optional<Resolution> record_rebalance_progress(SideAuction& s, double u_now, const RegimeThresholds& th) {
    Regime r = classify_regime(u_now, th);
    if (r != Regime::optimal) {
        ++s.breach_clock;
        s.peak = std::max(s.peak, r);
        return std::nullopt;
    }
    if (s.breach_clock == 0) return std::nullopt;
    Resolution res{s.breach_clock, s.peak};
    s.last_measured = s.breach_clock;
    s.breach_clock = 0;
    s.anchor = 0;
    s.peak = Regime::optimal;
    return res;
}

enum class Comparison { too_slow, too_fast, on_target };

constexpr const char* to_string(Comparison c) {
    switch (c) {
    case Comparison::too_slow: return "too_slow";
    case Comparison::too_fast: return "too_fast";
    case Comparison::on_target: return "on_target";
    }
    return "?";
}

struct AggressivenessUpdate {
    double a_before = 0.0;
    double a_after = 0.0;
    bool capped = false;
    Money upsilon; // premium change the treasury funds (negative: released)
};

/// One Λ step. An increase the treasury cannot fund in full is cut back so the
/// added premium |T|·ΔA·D equals the reserve exactly.
inline AggressivenessUpdate update_aggressiveness(const SideAuction& s, double t_open, Comparison cmp, double d,
                                                  Money tr) {
    if (t_open == 0.0) fail(ErrorCode::InactiveSide, "no open imbalance on this side");
    AggressivenessUpdate u;
    u.a_before = s.a;
    u.a_after = s.a;
    double m = std::abs(t_open);
    switch (cmp) {
    case Comparison::on_target: break;
    case Comparison::too_fast: {
        u.a_after = std::max(s.a - s.lambda, s.a_min);
        u.upsilon = Money::from_double(discrepancy(m, u.a_before, u.a_after, d));
        break;
    }
    case Comparison::too_slow: {
        Money full = Money::from_double(m * s.lambda * d);
        if (full <= tr) {
            u.a_after = s.a + s.lambda;
            u.upsilon = full;
        } else {
            u.capped = true;
            u.upsilon = tr;
            u.a_after = tr.is_positive() && m * d > 0.0 ? s.a + tr.to_double() / (m * d) : s.a;
        }
        break;
    }
    }
    return u;
}

struct AuctionInput {
    AssetId asset;
    double t = 0.0;     // current T
    double u_rhs = 0.0; // deficit-side utilisation
    double u_lhs = 0.0; // surplus-side utilisation
};

struct AuctionClock {
    std::int64_t timestep = 0;
    bool epoch_boundary = false; // check band deadlines
    bool advance = true;         // count this timestep on the breach clocks
    std::int64_t epoch_length = 1;
};

struct AuctionEvent {
    std::int64_t timestep = 0;
    AssetId asset;
    PremiumSide side = PremiumSide::rhs;
    Regime regime = Regime::optimal;
    std::int64_t breach_clock = 0;
    std::int64_t target = 0;
    bool target_in_timesteps = false;
    Comparison comparison = Comparison::on_target;
    double a_before = 0.0;
    double a_after = 0.0;
    bool capped = false;
    Money upsilon;
    Money tr_after;
};

namespace detail {
inline std::int64_t epochs_ceil(std::int64_t steps, std::int64_t epoch_length) {
    return (steps + epoch_length - 1) / epoch_length;
}

inline void set_aggressiveness(RebalanceParams& p, PremiumSide side, double a) {
    (side == PremiumSide::rhs ? p.a_rhs : p.a_lhs) = a;
}
inline double cover_of(const RebalanceParams& p, PremiumSide side) { return side == PremiumSide::rhs ? p.d_rhs : p.d_lhs; }
} // namespace detail

/// Auction bookkeeping for every asset in ascending id order. With `advance`
/// the breach clocks tick and critical deadlines are checked; band deadlines
/// are checked only when `epoch_boundary` is set.
inline std::vector<AuctionEvent> auction_step(AuctionBook& book, ParamBook& params, const std::vector<AuctionInput>& inputs,
                                              const RegimeThresholds& th, const RebalanceTargets& targets,
                                              TreasuryReserve& treasury, const AuctionClock& clock) {
    std::vector<AuctionEvent> events;
    std::map<AssetId, const AuctionInput*> ordered;
    for (const auto& in : inputs) ordered[in.asset] = &in;
    for (const auto& [id, in] : ordered) {
        auto bit = book.find(id);
        auto pit = params.find(id);
        if (bit == book.end() || pit == params.end()) continue;
        for (PremiumSide side : {PremiumSide::rhs, PremiumSide::lhs}) {
            SideAuction& s = bit->second.side(side);
            double u = side == PremiumSide::rhs ? in->u_rhs : in->u_lhs;
            // open premium on this side only
            double t_side = side == PremiumSide::rhs ? std::max(in->t, 0.0) : std::min(in->t, 0.0);
            double d = detail::cover_of(pit->second, side);

            AuctionEvent ev;
            ev.timestep = clock.timestep;
            ev.asset = id;
            ev.side = side;
            ev.a_before = s.a;
            ev.a_after = s.a;

            std::optional<Resolution> res;
            if (clock.advance) res = record_rebalance_progress(s, u, th);
            bool fire = false;
            if (res) {
                Deadline dl = target_for(res->peak, targets);
                std::int64_t measured = dl.in_timesteps ? res->measured : detail::epochs_ceil(res->measured, clock.epoch_length);
                ev.regime = res->peak;
                ev.breach_clock = res->measured;
                ev.target = dl.value;
                ev.target_in_timesteps = dl.in_timesteps;
                ev.comparison = measured < dl.value ? Comparison::too_fast
                                                    : (measured > dl.value ? Comparison::too_slow : Comparison::on_target);
                // slow breaches already paid through expiries
                if (ev.comparison == Comparison::too_fast) {
                    fire = true;
                    if (t_side == 0.0) {
                        ev.a_after = std::max(s.a - s.lambda, s.a_min);
                    } else {
                        auto up = update_aggressiveness(s, t_side, Comparison::too_fast, d, treasury.balance);
                        ev.a_after = up.a_after;
                        ev.upsilon = up.upsilon;
                    }
                }
            } else if (s.breach_clock > 0 && classify_regime(u, th) != Regime::optimal) {
                // back in band but not yet counted: the next advancing step resolves it
                Regime r = classify_regime(u, th);
                Deadline dl = target_for(r, targets);
                std::int64_t elapsed = s.breach_clock - s.anchor;
                bool expired = dl.in_timesteps ? clock.advance && elapsed > dl.value
                                               : clock.epoch_boundary && detail::epochs_ceil(elapsed, clock.epoch_length) > dl.value;
                if (expired) {
                    fire = true;
                    s.anchor = s.breach_clock;
                    ev.regime = r;
                    ev.breach_clock = s.breach_clock;
                    ev.target = dl.value;
                    ev.target_in_timesteps = dl.in_timesteps;
                    ev.comparison = Comparison::too_slow;
                    if (t_side != 0.0) {
                        auto up = update_aggressiveness(s, t_side, Comparison::too_slow, d, treasury.balance);
                        ev.a_after = up.a_after;
                        ev.capped = up.capped;
                        ev.upsilon = up.upsilon;
                    }
                }
            }
            if (!fire) continue;
            // released premium returns to the reserve; funded increases draw it down
            treasury = treasury_update(treasury, Money::zero(), ev.upsilon);
            s.a = ev.a_after;
            detail::set_aggressiveness(pit->second, side, s.a);
            ev.tr_after = treasury.balance;
            events.push_back(ev);
        }
    }
    return events;
}

} // namespace dfmm
