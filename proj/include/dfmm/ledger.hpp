#pragma once

// Asset pools, their paired accounting-asset pools, and the append-only
// transaction log that every balance can be rebuilt from.

#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dfmm {

using AssetId = std::string;

struct AssetPool {
    AssetId asset_id;
    Units inventory;    // I
    Units lp_inventory; // I_LP
};

struct SyntheticPool {
    AssetId asset_id;
    Money t; // net $S withdrawn minus deposited; > 0 means the asset is short of its LP level
};

struct Slot {
    std::uint64_t slot_id = 0;
    std::int64_t start_time = 0;
    std::int64_t end_time = 0; // exclusive; equals the next slot's start
    Units v_plus;  // sold into the pool during the slot
    Units v_minus; // bought out of the pool during the slot
};

struct AssetCurves {
    Eldf bid;
    Eldf ask;
};

using CurveBook = std::map<AssetId, AssetCurves>;

inline const AssetCurves& curves_for(const CurveBook& book, const AssetId& id) {
    auto it = book.find(id);
    if (it == book.end()) fail(ErrorCode::ValuationUnavailable, "no curves for asset " + id);
    return it->second;
}

/// $S value of `amount` units on `curve`, integrated from zero volume.
inline Money curve_value(const Eldf& curve, Units amount) {
    return Money::from_double(integrate_eldf(curve, 0.0, amount.to_double()));
}

// ------------------------------------------------------------------ pure ops

inline Units open_inventory(const AssetPool& pool) { return pool.inventory - pool.lp_inventory; }

inline AssetPool deposit_plp(AssetPool pool, Units amount) {
    if (!amount.is_positive()) fail(ErrorCode::NonPositiveAmount, "pLP deposit must be positive");
    pool.inventory += amount;
    pool.lp_inventory += amount;
    return pool;
}

struct Withdrawal {
    AssetPool pool;
    Units in_kind;
    Money paid; // $S paid for the part the pool could not cover in kind
};

/// Pays in kind up to the pool's inventory and the bid-curve value of any
/// shortfall in $S. `bid` may be null when no shortfall can arise.
inline Withdrawal withdraw_plp(AssetPool pool, Units amount, const Eldf* bid) {
    if (!amount.is_positive()) fail(ErrorCode::NonPositiveAmount, "pLP withdrawal must be positive");
    if (amount > pool.lp_inventory) fail(ErrorCode::ExceedsLpClaim, "withdrawal exceeds LP claim on " + pool.asset_id);
    Units in_kind = min(amount, max(pool.inventory, Units::zero()));
    Units shortfall = amount - in_kind;
    Money paid;
    if (shortfall.is_positive()) {
        if (bid == nullptr) fail(ErrorCode::ValuationUnavailable, "no bid curve to value shortfall on " + pool.asset_id);
        paid = curve_value(*bid, shortfall);
    }
    pool.inventory -= in_kind;
    pool.lp_inventory -= amount;
    return {pool, in_kind, paid};
}

inline SyntheticPool apply_synthetic_flow(SyntheticPool spool, Money withdrawn, Money deposited) {
    if (withdrawn.is_negative() || deposited.is_negative()) {
        fail(ErrorCode::NegativeFlow, "synthetic flows must be nonnegative");
    }
    spool.t += withdrawn - deposited;
    return spool;
}

/// Required T for a fully hedged pool: minus the bid value of a surplus, plus
/// the ask value of a deficit.
inline Money hedge_target(const AssetPool& pool, const AssetCurves& curves) {
    Units open = open_inventory(pool);
    if (open.is_zero()) return Money::zero();
    if (!open.is_negative()) return -curve_value(curves.bid, open);
    return curve_value(curves.ask, open.abs());
}

// ------------------------------------------------------------------ log

namespace log_entry {
struct PlpDeposit {
    std::int64_t timestep;
    AssetId asset;
    Units amount;
};
struct PlpWithdraw {
    std::int64_t timestep;
    AssetId asset;
    Units amount;
    Units in_kind;
    Money paid;
};
struct SyntheticFlow {
    std::int64_t timestep;
    AssetId asset;
    Money withdrawn;
    Money deposited;
};
struct Swap {
    std::int64_t timestep;
    AssetId asset_in;
    AssetId asset_out;
    Units v_in;
    Units v_out;
    Money v_s;
    Money v_prime_s;
    Money rp_in;
    Money rp_out;
    Money fee;
};
struct InventoryAdjust {
    std::int64_t timestep;
    AssetId asset;
    Units delta;
};
struct ReserveTransfer {
    std::int64_t timestep;
    AssetId asset;
    Money amount; // into the asset's premium reserve
};
struct SlotStart {
    std::int64_t timestep;
    AssetId asset;
    std::uint64_t slot_id;
};
} // namespace log_entry

using LogEntry = std::variant<log_entry::PlpDeposit, log_entry::PlpWithdraw, log_entry::SyntheticFlow,
                              log_entry::Swap, log_entry::InventoryAdjust, log_entry::ReserveTransfer,
                              log_entry::SlotStart>;

struct Solvency {
    bool solvent = true;
    Money surplus; // negative means deficit

    Money deficit() const { return surplus.is_negative() ? -surplus : Money::zero(); }
};

class BalanceSheet {
public:
    struct AssetState {
        AssetPool pool;
        SyntheticPool synthetic;
        Slot slot;
        Money premium_reserve; // RR
        std::vector<Slot> closed_slots;
    };

    void add_asset(const AssetId& id) {
        if (assets_.count(id)) return;
        assets_.emplace(id, AssetState{AssetPool{id, {}, {}}, SyntheticPool{id, {}}, Slot{}, {}, {}});
        ++version_;
    }

    bool has_asset(const AssetId& id) const { return assets_.count(id) != 0; }

    const AssetState& asset(const AssetId& id) const {
        auto it = assets_.find(id);
        if (it == assets_.end()) fail(ErrorCode::UnknownAsset, id);
        return it->second;
    }
    const AssetPool& pool(const AssetId& id) const { return asset(id).pool; }
    Money t(const AssetId& id) const { return asset(id).synthetic.t; }
    const std::map<AssetId, AssetState>& assets() const { return assets_; }
    const std::vector<LogEntry>& log() const { return log_; }
    std::uint64_t version() const { return version_; }
    Money shortfall_paid() const { return shortfall_paid_; }

    Money total_premium_reserve() const {
        Money sum;
        for (const auto& [id, st] : assets_) sum += st.premium_reserve;
        return sum;
    }

    void deposit_plp(const AssetId& id, Units amount, std::int64_t timestep = 0) {
        append(log_entry::PlpDeposit{timestep, id, amount});
    }

    Withdrawal withdraw_plp(const AssetId& id, Units amount, const CurveBook& curves, std::int64_t timestep = 0) {
        auto& st = mut(id);
        auto cit = curves.find(id);
        const Eldf* bid = cit == curves.end() ? nullptr : &cit->second.bid;
        Withdrawal w = dfmm::withdraw_plp(st.pool, amount, bid);
        append(log_entry::PlpWithdraw{timestep, id, amount, w.in_kind, w.paid});
        return w;
    }

    void apply_synthetic_flow(const AssetId& id, Money withdrawn, Money deposited, std::int64_t timestep = 0) {
        append(log_entry::SyntheticFlow{timestep, id, withdrawn, deposited});
    }

    // Commits a priced fill; pricing validates it before calling.
    void commit_swap(const log_entry::Swap& s) {
        apply(s);
        log_.emplace_back(s);
        ++version_;
    }

    /// Out-of-band inventory change; used for fault injection in tests.
    void adjust_inventory(const AssetId& id, Units delta, std::int64_t timestep = 0) {
        append(log_entry::InventoryAdjust{timestep, id, delta});
    }

    /// Moves $S into (positive) or out of (negative) an asset's premium reserve.
    void transfer_reserve(const AssetId& id, Money amount, std::int64_t timestep = 0) {
        append(log_entry::ReserveTransfer{timestep, id, amount});
    }

    void start_slot(const AssetId& id, std::uint64_t slot_id, std::int64_t timestep) {
        append(log_entry::SlotStart{timestep, id, slot_id});
    }

    /// Rebuilds a sheet from genesis by re-applying every entry.
    static BalanceSheet replay(const std::vector<LogEntry>& log, const std::vector<AssetId>& assets) {
        BalanceSheet out;
        for (const auto& id : assets) out.add_asset(id);
        for (const auto& e : log) out.append_entry(e);
        return out;
    }

    friend bool same_balances(const BalanceSheet& a, const BalanceSheet& b) {
        if (a.assets_.size() != b.assets_.size() || a.shortfall_paid_ != b.shortfall_paid_) return false;
        for (const auto& [id, x] : a.assets_) {
            auto it = b.assets_.find(id);
            if (it == b.assets_.end()) return false;
            const auto& y = it->second;
            if (x.pool.inventory != y.pool.inventory || x.pool.lp_inventory != y.pool.lp_inventory ||
                x.synthetic.t != y.synthetic.t || x.premium_reserve != y.premium_reserve ||
                x.slot.slot_id != y.slot.slot_id || x.slot.v_plus != y.slot.v_plus ||
                x.slot.v_minus != y.slot.v_minus || x.slot.start_time != y.slot.start_time) {
                return false;
            }
        }
        return true;
    }

private:
    AssetState& mut(const AssetId& id) {
        auto it = assets_.find(id);
        if (it == assets_.end()) fail(ErrorCode::UnknownAsset, id);
        return it->second;
    }

    template <typename E>
    void append(E e) {
        apply(e);
        log_.emplace_back(std::move(e));
        ++version_;
    }

    void append_entry(const LogEntry& e) {
        std::visit([this](const auto& x) { append(x); }, e);
    }

    void apply(const log_entry::PlpDeposit& e) {
        auto& st = mut(e.asset);
        st.pool = dfmm::deposit_plp(st.pool, e.amount);
    }
    void apply(const log_entry::PlpWithdraw& e) {
        auto& st = mut(e.asset);
        if (e.amount > st.pool.lp_inventory) fail(ErrorCode::ExceedsLpClaim, "replayed withdrawal exceeds claim");
        st.pool.inventory -= e.in_kind;
        st.pool.lp_inventory -= e.amount;
        shortfall_paid_ += e.paid;
    }
    void apply(const log_entry::SyntheticFlow& e) {
        auto& st = mut(e.asset);
        st.synthetic = dfmm::apply_synthetic_flow(st.synthetic, e.withdrawn, e.deposited);
    }
    void apply(const log_entry::Swap& e) {
        auto& in = mut(e.asset_in);
        auto& out = mut(e.asset_out);
        if (e.v_out > out.pool.inventory) fail(ErrorCode::InsufficientInventory, "fill exceeds inventory of " + e.asset_out);
        in.pool.inventory += e.v_in;
        in.synthetic.t -= e.v_prime_s;
        in.premium_reserve += e.rp_in;
        in.slot.v_plus += e.v_in;
        out.pool.inventory -= e.v_out;
        out.synthetic.t += e.v_prime_s;
        out.premium_reserve += e.rp_out;
        out.slot.v_minus += e.v_out;
    }
    void apply(const log_entry::InventoryAdjust& e) {
        auto& st = mut(e.asset);
        if ((st.pool.inventory + e.delta).is_negative()) {
            fail(ErrorCode::InsufficientInventory, "adjustment drives inventory < 0");
        }
        st.pool.inventory += e.delta;
    }
    void apply(const log_entry::ReserveTransfer& e) { mut(e.asset).premium_reserve += e.amount; }
    void apply(const log_entry::SlotStart& e) {
        auto& st = mut(e.asset);
        st.slot.end_time = e.timestep;
        st.closed_slots.push_back(st.slot);
        st.slot = Slot{e.slot_id, e.timestep, e.timestep, Units::zero(), Units::zero()};
    }

    std::map<AssetId, AssetState> assets_;
    std::vector<LogEntry> log_;
    std::uint64_t version_ = 0;
    Money shortfall_paid_;
};

/// Both sides of the obligation inequality, summed over every pool: bid value
/// of current inventory against bid value of LP-owned inventory.
inline Solvency solvency_check(const BalanceSheet& sheet, const CurveBook& curves) {
    Money assets_value, liabilities_value;
    for (const auto& [id, st] : sheet.assets()) {
        if (st.pool.inventory.is_zero() && st.pool.lp_inventory.is_zero()) continue;
        const auto& c = curves_for(curves, id);
        assets_value += curve_value(c.bid, st.pool.inventory);
        liabilities_value += curve_value(c.bid, st.pool.lp_inventory);
    }
    Money surplus = assets_value - liabilities_value;
    return {!surplus.is_negative(), surplus};
}

} // namespace dfmm
