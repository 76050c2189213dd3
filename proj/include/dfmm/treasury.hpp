#pragma once

// Treasury reserve (fees in, auction discrepancies out) and the split of the
// remaining AMM fee between pLPs and the two sLP vault classes.

#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/ledger.hpp"
#include "dfmm/pricing.hpp"

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace dfmm {

struct TreasuryReserve {
    Money balance;            // TR
    Money cumulative_xi;      // ΣΞ
    Money cumulative_upsilon; // ΣΥ, signed
};

/// Premium change at fixed T when aggressiveness moves from a_prev to a_next.
inline double discrepancy(double t_open, double a_prev, double a_next, double d) {
    double m = std::abs(t_open);
    return m * (m + a_next) * d - m * (m + a_prev) * d;
}

inline Money rebalancing_fee(Money v, double xi) {
    if (!(xi >= 0.0 && xi < 1.0)) fail(ErrorCode::BadRate, "rebalancing fee rate must be in [0, 1)");
    return v.scaled(xi);
}

inline TreasuryReserve treasury_update(TreasuryReserve r, Money xi_delta, Money upsilon_delta) {
    Money next = r.balance + xi_delta - upsilon_delta;
    if (next.is_negative()) {
        fail(ErrorCode::NegativeReserveInvariantBreach, "treasury reserve would fall to " + next.to_string());
    }
    r.cumulative_xi += xi_delta;
    r.cumulative_upsilon += upsilon_delta;
    r.balance = next;
    return r;
}

inline Money reward_accrue(Money v, const FeeSchedule& fees) {
    if (!fees.valid()) fail(ErrorCode::BadRates, "need 0 <= xi <= theta < 1");
    return v.scaled(fees.theta - fees.xi);
}

/// Splits a fill's fee into the treasury's Ξ and the LP reward, exactly.
struct FeeSplit {
    Money xi;
    Money reward;
};

inline FeeSplit split_fee(Money fee, Money v_s, const FeeSchedule& fees) {
    Money xi = min(rebalancing_fee(v_s, fees.xi), fee);
    return {xi, fee - xi};
}

enum class LpClass { plp, slp_long, slp_short };

constexpr const char* to_string(LpClass c) {
    switch (c) {
    case LpClass::plp: return "plp";
    case LpClass::slp_long: return "slp_long";
    case LpClass::slp_short: return "slp_short";
    }
    return "?";
}

struct RewardShares {
    Money plp;
    Money slp_long;
    Money slp_short;

    Money total() const { return plp + slp_long + slp_short; }
};

struct CapacityShares {
    double plp = 0.0;
    double slp_short = 0.0;
    double slp_long = 0.0;
};

struct DistributionInputs {
    double inventory = 0.0;    // I
    double lp_inventory = 0.0; // I_LP
    double cap_short = 0.0;    // C_S/ϱ_S, asset units
    double cap_long = 0.0;     // C_L/ϱ_L, asset units
};

struct DistributionParams {
    double gamma = 0.01; // transfer step, fraction of accrued
    double alpha = 1.0;
    double k = 0.0;          // carried for configs, not used by the split
    double tolerance = 1e-9; // how close to one third counts as on target
};

inline CapacityShares capacity_shares(const DistributionInputs& in, double alpha) {
    double b = in.inventory + in.cap_short + in.cap_long;
    if (!(b > 0.0)) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    double di = in.inventory - in.lp_inventory;
    return {in.inventory / b, (in.cap_short - alpha * di) / b, (in.cap_long - alpha * di) / b};
}

/// Equal thirds, then at most one round of corrective γ transfers toward the
/// class whose capacity share lags the one-third target. No share goes below 0.
inline RewardShares reward_distribute(const DistributionInputs& in, Money accrued, const DistributionParams& p = {}) {
    if (accrued.is_negative()) fail(ErrorCode::BadParams, "accrued reward must be nonnegative");
    RewardShares r;
    if (accrued.is_zero()) return r;
    Money third = Money::from_raw(accrued.raw() / 3);
    r.slp_long = third;
    r.slp_short = third;
    r.plp = accrued - third - third;

    Money gamma = accrued.scaled(p.gamma);
    Money half = Money::from_raw(gamma.raw() / 2);
    Money other_half = gamma - half;
    auto pay = [](Money& from, Money& to, Money amount) {
        Money amt = min(amount, from);
        from -= amt;
        to += amt;
    };

    const double target = 1.0 / 3.0;
    CapacityShares s = capacity_shares(in, p.alpha);
    auto on = [&](double x) { return std::abs(x - target) <= p.tolerance; };
    auto over = [&](double x, double margin) { return x > target + margin + p.tolerance; };
    auto under = [&](double x) { return x < target - p.tolerance; };

    if (on(s.plp)) {
        if (on(s.slp_short) && on(s.slp_long)) return r;
        if (over(s.slp_long, 0.0)) {
            pay(r.slp_long, r.slp_short, gamma);
        } else if (over(s.slp_short, 0.0)) {
            pay(r.slp_short, r.slp_long, gamma);
        }
    } else if (s.plp > target) {
        bool s_low = under(s.slp_short);
        bool l_low = under(s.slp_long);
        if (s_low == l_low) {
            pay(r.plp, r.slp_short, half);
            pay(r.plp, r.slp_long, other_half);
        } else if (s_low) {
            pay(r.plp, r.slp_short, gamma);
        } else {
            pay(r.plp, r.slp_long, gamma);
        }
    } else {
        bool l_over = over(s.slp_long, 0.5 * p.gamma);
        bool s_over = over(s.slp_short, 0.5 * p.gamma);
        if (l_over == s_over) {
            pay(r.slp_long, r.plp, half);
            pay(r.slp_short, r.plp, other_half);
        } else if (l_over) {
            pay(r.slp_long, r.plp, gamma);
        } else {
            pay(r.slp_short, r.plp, gamma);
        }
    }
    return r;
}

/// Accrued-but-undistributed rewards per asset and claimable balances per agent.
class RewardLedger {
public:
    using Key = std::tuple<std::string, AssetId, LpClass>; // agent, asset, class

    void accrue(const AssetId& asset, Money amount) { pending_[asset] += amount; }

    Money pending(const AssetId& asset) const {
        auto it = pending_.find(asset);
        return it == pending_.end() ? Money::zero() : it->second;
    }

    /// Moves the asset's pending balance to the classes and then to agents,
    /// pro rata to `stakes`. A class nobody holds credits the "unassigned" agent.
    RewardShares distribute(const AssetId& asset, const DistributionInputs& in, const DistributionParams& p,
                            const std::map<LpClass, std::vector<std::pair<std::string, double>>>& stakes) {
        Money accrued = pending(asset);
        RewardShares sh = reward_distribute(in, accrued, p);
        pending_[asset] = Money::zero();
        credit(asset, LpClass::plp, sh.plp, stakes);
        credit(asset, LpClass::slp_long, sh.slp_long, stakes);
        credit(asset, LpClass::slp_short, sh.slp_short, stakes);
        auto& tot = totals_[asset];
        tot.plp += sh.plp;
        tot.slp_long += sh.slp_long;
        tot.slp_short += sh.slp_short;
        return sh;
    }

    const std::map<Key, Money>& claims() const { return claims_; }
    const std::map<AssetId, RewardShares>& totals() const { return totals_; }

    Money total_pending() const {
        Money s;
        for (const auto& [a, m] : pending_) s += m;
        return s;
    }
    Money total_claimable() const {
        Money s;
        for (const auto& [k, m] : claims_) s += m;
        return s;
    }

private:
    void credit(const AssetId& asset, LpClass cls, Money amount,
                const std::map<LpClass, std::vector<std::pair<std::string, double>>>& stakes) {
        if (amount.is_zero()) return;
        auto it = stakes.find(cls);
        double total = 0.0;
        if (it != stakes.end()) {
            for (const auto& [agent, w] : it->second) total += std::max(w, 0.0);
        }
        if (!(total > 0.0)) {
            claims_[{"unassigned", asset, cls}] += amount;
            return;
        }
        Money left = amount;
        const std::string* first = nullptr;
        for (const auto& [agent, w] : it->second) {
            if (!(w > 0.0)) continue;
            if (!first) first = &agent;
            // floor of the pro-rata share, computed in long double for headroom
            long double share = static_cast<long double>(amount.raw()) * (w / total);
            Money part = min(Money::from_raw(static_cast<int128>(std::floor(share))), left);
            claims_[{agent, asset, cls}] += part;
            left -= part;
        }
        if (left.is_positive()) claims_[{*first, asset, cls}] += left;
    }

    std::map<AssetId, Money> pending_;
    std::map<AssetId, RewardShares> totals_;
    std::map<Key, Money> claims_;
};

} // namespace dfmm
