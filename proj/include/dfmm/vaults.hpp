#pragma once

// sLP margin vaults. The short vault covers deficits (I < I_LP), the long
// vault covers surpluses. Capacity C/ϱ is collateral grossed up by the
// collateralisation rate and converted to asset units at a reference price.

#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/ledger.hpp"
#include "dfmm/pricing.hpp"

#include <algorithm>
#include <cmath>

namespace dfmm {

enum class VaultSide { long_side, short_side };

constexpr const char* to_string(VaultSide s) { return s == VaultSide::long_side ? "long" : "short"; }

struct Vault {
    AssetId asset_id;
    VaultSide side = VaultSide::short_side;
    Money collateral;
    double coll_rate = 1.0; // ϱ in (0, 1]
    Money margin_floor;     // ε
    bool liquidated = false;

    /// C/ϱ in asset units at `price` $S per unit; zero once liquidated.
    double capacity(double price = 1.0) const {
        if (liquidated || !(coll_rate > 0.0) || !(price > 0.0)) return 0.0;
        return collateral.to_double() / coll_rate / price;
    }
};

inline Vault make_vault(AssetId id, VaultSide side, Money collateral, double coll_rate, Money margin_floor) {
    if (!(coll_rate > 0.0 && coll_rate <= 1.0)) fail(ErrorCode::BadParams, "collateralisation rate must be in (0, 1]");
    if (collateral.is_negative()) fail(ErrorCode::BadParams, "collateral must be nonnegative");
    return Vault{std::move(id), side, collateral, coll_rate, margin_floor, false};
}

struct Utilisation {
    double u_rhs = 0.0; // deficit side
    double u_lhs = 0.0; // surplus side
};

inline Utilisation utilisation(const AssetPool& pool, const Vault& long_vault, const Vault& short_vault,
                               double price = 1.0, double u_max_report = 1e6) {
    Utilisation u;
    double inv = pool.inventory.to_double();
    double lp = pool.lp_inventory.to_double();
    if (lp > inv) {
        double denom = std::min(lp, short_vault.capacity(price));
        if (!(denom > 0.0)) fail(ErrorCode::ZeroCapacity, "deficit on " + pool.asset_id + " with no short capacity");
        u.u_rhs = (lp - inv) / denom;
    } else if (inv > lp) {
        double denom = long_vault.capacity(price);
        if (!(denom > 0.0)) fail(ErrorCode::ZeroCapacity, "surplus on " + pool.asset_id + " with no long capacity");
        u.u_lhs = (inv - lp) / denom;
    }
    u.u_rhs = std::clamp(u.u_rhs, 0.0, u_max_report);
    u.u_lhs = std::clamp(u.u_lhs, 0.0, u_max_report);
    return u;
}

/// Cover coefficient rising from d_min at u = 0 to d_max at u = u_max.
inline double cover_coefficient(double u, double d_min, double d_max, double u_max, double k) {
    if (!(u >= 0.0) || !(d_min <= d_max) || !(u_max > 0.0) || !(k > 0.0)) {
        fail(ErrorCode::BadParams, "cover coefficient needs u >= 0, d_min <= d_max, u_max > 0, k > 0");
    }
    double x = std::min(u, u_max);
    if (x == u_max) return d_max;
    return (d_max - d_min) * std::pow(x / u_max, k) + d_min;
}

enum class SwaptionDirection {
    protocol_pays_variable, // surplus: the protocol owes the long vault any value gain
    protocol_pays_fixed,    // deficit: the short vault owes the protocol any value gain
};

constexpr const char* to_string(SwaptionDirection d) {
    return d == SwaptionDirection::protocol_pays_variable ? "protocol_pays_variable" : "protocol_pays_fixed";
}

struct SwaptionPosition {
    AssetId asset_id;
    Units notional;        // |I − I_LP| at strike
    Money fixed_leg_value; // notional valued on the strike curve
    SwaptionDirection direction = SwaptionDirection::protocol_pays_fixed;
};

/// Strikes one epoch's swaption on the current open inventory.
inline SwaptionPosition strike_swaption(const AssetPool& pool, const Eldf& curve) {
    Units open = open_inventory(pool);
    SwaptionPosition pos;
    pos.asset_id = pool.asset_id;
    pos.notional = open.abs();
    pos.direction = open.is_positive() ? SwaptionDirection::protocol_pays_variable : SwaptionDirection::protocol_pays_fixed;
    if (pos.notional.is_positive()) pos.fixed_leg_value = curve_value(curve, pos.notional);
    return pos;
}

enum class SettlementBasis {
    value, // fixed-leg $S value times the return
    units, // notional units times the return
};

/// Swaption amount for a change of valuation curve. Positive means the
/// notional gained value.
inline double settle_swaption(const SwaptionPosition& pos, const Eldf& curve_prev, const Eldf& curve_now,
                              SettlementBasis basis = SettlementBasis::value) {
    if (pos.notional.is_negative()) fail(ErrorCode::BadParams, "negative notional");
    if (pos.notional.is_zero()) return 0.0;
    double n = pos.notional.to_double();
    double prev = integrate_eldf(curve_prev, 0.0, n);
    if (!(prev > 0.0)) fail(ErrorCode::ZeroPrevValue, "notional has no value on the strike curve");
    double now = integrate_eldf(curve_now, 0.0, n);
    double ret = now / prev - 1.0;
    return basis == SettlementBasis::value ? prev * ret : n * ret;
}

enum class MarginStatus { ok, liquidate };

inline MarginStatus margin_check(const Vault& v) {
    return v.collateral <= v.margin_floor ? MarginStatus::liquidate : MarginStatus::ok;
}

// Liquidation is total; collateral left below the floor stays in the vault.
inline bool enforce_margin(Vault& v) {
    if (!v.liquidated && margin_check(v) == MarginStatus::liquidate) {
        v.liquidated = true;
        return true;
    }
    return false;
}

struct SettlementResult {
    double amount = 0.0; // raw settlement amount
    Money due;           // |amount|
    Money paid;          // what actually moved
    bool vault_pays = false;
    bool capped = false;
    bool liquidated = false;
};

/// Settles one position between `vault` and the protocol's hedge account.
/// Vault payments are non-recourse: capped at collateral.
inline SettlementResult apply_settlement(const SwaptionPosition& pos, double amount, Vault& vault, Money& hedge_account) {
    SettlementResult r;
    r.amount = amount;
    r.due = Money::from_double(std::abs(amount));
    if (r.due.is_zero()) return r;
    bool gain = amount > 0.0;
    r.vault_pays = pos.direction == SwaptionDirection::protocol_pays_fixed ? gain : !gain;
    if (r.vault_pays) {
        if (!vault.collateral.is_positive()) {
            fail(ErrorCode::NoCounterpartyCollateral, to_string(vault.side) + std::string(" vault on ") + pos.asset_id + " is empty");
        }
        r.paid = min(r.due, vault.collateral);
        r.capped = r.paid < r.due;
        vault.collateral -= r.paid;
        hedge_account += r.paid;
    } else {
        r.paid = r.due;
        vault.collateral += r.paid;
        hedge_account -= r.paid;
    }
    r.liquidated = enforce_margin(vault);
    return r;
}

struct TradeBounds {
    double v_max_bid = 0.0; // long capacity
    double v_max_ask = 0.0; // asset units
};

inline TradeBounds max_tradeable(const AssetPool& pool, const Vault& long_vault, const Vault& short_vault,
                                 double price = 1.0) {
    return {long_vault.capacity(price), std::min(pool.inventory.to_double(), short_vault.capacity(price))};
}

/// Pricing-side capacity: how far the pool may move off its LP level.
inline Capacity capacity_for(const AssetPool& pool, const Vault& long_vault, const Vault& short_vault,
                             double price = 1.0) {
    Capacity c;
    c.max_surplus = Units::from_double(long_vault.capacity(price));
    c.max_deficit = Units::from_double(std::min(pool.lp_inventory.to_double(), short_vault.capacity(price)));
    return c;
}

inline double capital_efficiency_gap(const AssetPool& pool, const Vault& short_vault, double price = 1.0) {
    return std::abs(short_vault.capacity(price) - pool.inventory.to_double());
}

struct PremiumFlow {
    Money to_short; // credited (positive) or debited to the short vault
    Money to_long;
    bool short_liquidated = false;
    bool long_liquidated = false;

    Money total() const { return to_short + to_long; }
};

namespace detail {
inline Money apply_flow(Vault& v, Money flow) {
    if (flow.is_negative() && -flow > v.collateral) flow = -v.collateral;
    v.collateral += flow;
    return flow;
}
} // namespace detail

/// Pays sLPs R(t_prev) − R(t_next). The share of the change on the deficit
/// branch goes to the short vault and the surplus branch to the long vault.
/// Debits stop at zero collateral.
inline PremiumFlow slp_premium_flow(double t_prev, double t_next, const RebalanceParams& params, Vault& long_vault,
                                    Vault& short_vault) {
    PremiumFlow f;
    auto rhs = [&](double t) { return premium_value(Money::from_double(std::max(t, 0.0)), params); };
    auto lhs = [&](double t) { return premium_value(Money::from_double(std::min(t, 0.0)), params); };
    f.to_short = detail::apply_flow(short_vault, rhs(t_prev) - rhs(t_next));
    f.to_long = detail::apply_flow(long_vault, lhs(t_prev) - lhs(t_next));
    f.short_liquidated = enforce_margin(short_vault);
    f.long_liquidated = enforce_margin(long_vault);
    return f;
}

struct BundleDelta {
    AssetId asset_id;
    double delta_plp = 0.0; // open inventory the pool carries
    double delta_slp = 0.0; // minus the notional the vaults hedge

    double net() const { return delta_plp + delta_slp; }
    bool complete(double tol = 0.0) const { return std::abs(net()) <= tol; }
};

inline BundleDelta bundle_delta(const AssetPool& pool, const SwaptionPosition& pos) {
    double open = open_inventory(pool).to_double();
    double hedged = pos.notional.to_double();
    return {pool.asset_id, open, open >= 0.0 ? -hedged : hedged};
}

} // namespace dfmm
