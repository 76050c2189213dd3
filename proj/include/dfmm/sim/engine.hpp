#pragma once

// Scenario runner. Each timestep runs, in order: external market step, slot
// refit, trader flow, arbitrageur, auction bookkeeping, metrics. Every
// epoch_length timesteps the epoch step follows: swaption settlement, sLP
// premium flow, queued vault changes, utilisation and cover refresh, band
// deadline checks, reward distribution, re-strike.

#include "dfmm/auction.hpp"
#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/io/table.hpp"
#include "dfmm/ledger.hpp"
#include "dfmm/metrics.hpp"
#include "dfmm/pricing.hpp"
#include "dfmm/sim/agents.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/market.hpp"
#include "dfmm/sim/rng.hpp"
#include "dfmm/treasury.hpp"
#include "dfmm/vaults.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace dfmm::sim {

inline constexpr const char* kEngineVersion = "0.1.0";

// reported utilisation when open inventory exists but no capacity backs it
inline constexpr double kUnbackedUtilisation = 1e6;

struct AssetRuntime {
    Vault long_vault;
    Vault short_vault;
    std::map<std::string, double> long_stakes;
    std::map<std::string, double> short_stakes;
    Money long_net_deposits;
    Money short_net_deposits;
    SwaptionPosition position;
    Eldf strike_curve;
    bool struck = false;
    Money t_epoch_open;
    Utilisation u;
};

struct Totals {
    Money v_s;
    Money v_prime;
    Money rp;
    Money fee;
    Money xi;
    Money reward;
    Money upsilon_to_reserve;
    std::int64_t fills = 0;
    std::int64_t arb_fills = 0;
    std::int64_t rejected = 0;
    std::int64_t liquidations = 0;
    std::int64_t solvency_breaches = 0;
    double worst_solvency_margin = std::numeric_limits<double>::infinity();
    double max_deficit = 0.0;
    double max_utilisation = 0.0;
    double arb_pnl = 0.0;
};

struct RunState {
    ScenarioConfig config;
    std::int64_t t = 0;
    std::int64_t epoch = 0;
    ExternalMarket market;
    Rng rng{1};
    BalanceSheet sheet;
    CurveBook pricing;   // venue curves, no extrapolation
    CurveBook valuation; // same curves with clamped tails
    std::uint64_t slot_id = 0;
    ParamBook params;
    AuctionBook auction;
    TreasuryReserve treasury;
    RewardLedger rewards;
    Money hedge_account;       // swaption settlements, protocol side
    Money slp_premium_account; // premium flows paid to (−) or taken from (+) sLP vaults
    std::map<AssetId, AssetRuntime> rt;
    Totals totals;
    std::size_t next_script = 0;
    bool halted = false;
    std::string diagnostic;
    std::map<std::string, io::Table> tables;

    std::vector<AssetId> asset_ids() const {
        std::vector<AssetId> ids;
        for (const auto& [id, st] : sheet.assets()) ids.push_back(id);
        return ids;
    }
    double mid(const AssetId& id) const { return market.find(id)->mid; }
    io::Table& table(const std::string& name) { return tables.at(name); }
};

namespace detail {

inline void declare_tables(RunState& r) {
    auto add = [&](const std::string& name, std::vector<std::string> cols) {
        r.tables[name] = io::Table{name, 1, std::move(cols), {}};
    };
    add("fills", {"timestep", "agent", "asset_in", "asset_out", "v_in", "v_s", "v_prime_s", "rp_x", "rp_y", "fee", "xi",
                  "reward", "v_out", "t_x_after", "t_y_after", "crossing"});
    add("transactions", {"seq", "timestep", "kind", "asset", "counter_asset", "units_in", "units_out", "value", "ref"});
    add("vaults", {"epoch", "timestep", "asset", "side", "c_before", "premium_flow", "settlement", "deposit", "c_after",
                   "liquidated"});
    add("auction", {"timestep", "asset", "side", "regime", "breach_clock", "target", "target_unit", "comparison",
                    "a_before", "a_after", "capped", "upsilon", "tr_after"});
    add("treasury", {"timestep", "kind", "asset", "amount", "tr_after"});
    add("claims", {"agent", "asset", "class", "claimable"});
    add("metrics", {"timestep", "metric_id", "context", "value"});
    add("curves", {"timestep", "slot_id", "asset", "side", "c2", "c1", "c0", "v_lo", "v_hi"});
    add("snapshots", {"timestep", "asset", "side", "volume", "price"});
    add("events", {"timestep", "kind", "asset", "detail"});
    add("summary", {"key", "value"});
}

inline void event(RunState& r, const std::string& kind, const std::string& asset, const std::string& detail) {
    r.table("events").add(r.t, kind, asset, detail);
}

inline Eldf clamped(Eldf c) {
    c.extrapolation = Extrapolation::clamp;
    return c;
}

inline Utilisation safe_utilisation(const AssetPool& pool, const AssetRuntime& a, double price) {
    try {
        return utilisation(pool, a.long_vault, a.short_vault, price, kUnbackedUtilisation);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroCapacity) throw;
        Utilisation u;
        (open_inventory(pool).is_negative() ? u.u_rhs : u.u_lhs) = kUnbackedUtilisation;
        return u;
    }
}

inline CapacityBook capacities(const RunState& r) {
    CapacityBook caps;
    for (const auto& [id, a] : r.rt) caps[id] = capacity_for(r.sheet.pool(id), a.long_vault, a.short_vault, r.mid(id));
    return caps;
}

inline void refit(RunState& r, const std::vector<AssetSnapshot>& snaps, bool start_slot) {
    for (const auto& s : snaps) {
        try {
            auto bid_pts = aggregate_venues(s.bids, Side::bid);
            auto ask_pts = aggregate_venues(s.asks, Side::ask);
            Eldf bid = fit_eldf(bid_pts, 2, Side::bid, r.slot_id);
            Eldf ask = fit_eldf(ask_pts, 2, Side::ask, r.slot_id);
            r.pricing[s.id] = {bid, ask};
            r.valuation[s.id] = {clamped(bid), clamped(ask)};
            for (const Eldf* c : {&bid, &ask}) {
                r.table("curves").add(r.t, r.slot_id, s.id, to_string(c->side), c->c2, c->c1, c->c0, c->v_lo, c->v_hi);
            }
            if (r.config.write_snapshots) {
                for (const auto& p : bid_pts) r.table("snapshots").add(r.t, s.id, "bid", p.volume, p.price);
                for (const auto& p : ask_pts) r.table("snapshots").add(r.t, s.id, "ask", p.volume, p.price);
            }
        } catch (const Error& e) {
            if (!r.pricing.count(s.id)) throw;
            event(r, "fit_failed", s.id, std::string(to_string(e.code())));
        }
        if (start_slot) r.sheet.start_slot(s.id, r.slot_id, r.t);
    }
}

/// Quotes and commits one trade; non-fatal pricing failures become reject events.
inline bool execute_intent(RunState& r, const TradeIntent& in, const std::string& agent, const SwapQuote* prequoted = nullptr) {
    try {
        SwapQuote q;
        if (prequoted) {
            q = *prequoted;
        } else {
            CapacityBook caps = capacities(r);
            q = quote_swap(in.asset_in, in.asset_out, Units::from_double(in.v_in), r.sheet, r.pricing, r.params,
                           r.config.fees, &caps);
        }
        Fill f = execute_swap(q, r.sheet, r.pricing, r.t);
        FeeSplit split = split_fee(q.fee, q.v_s, r.config.fees);
        r.treasury = treasury_update(r.treasury, split.xi, Money::zero());
        r.rewards.accrue(q.asset_in, split.reward);
        auto& tot = r.totals;
        tot.v_s += q.v_s;
        tot.v_prime += q.v_prime_s;
        tot.rp += q.rp_in + q.rp_out;
        tot.fee += q.fee;
        tot.xi += split.xi;
        tot.reward += split.reward;
        ++tot.fills;
        r.table("fills").add(r.t, agent, q.asset_in, q.asset_out, q.v_in, q.v_s, q.v_prime_s, q.rp_in, q.rp_out, q.fee,
                             split.xi, split.reward, f.v_out, q.t_in_after, q.t_out_after, to_string(q.crossing));
        if (split.xi.is_positive()) r.table("treasury").add(r.t, "xi", q.asset_in, split.xi, r.treasury.balance);
        if (split.reward.is_positive()) r.table("treasury").add(r.t, "reward", q.asset_in, split.reward, r.treasury.balance);
        return true;
    } catch (const Error& e) {
        if (is_fatal(e.code())) throw;
        ++r.totals.rejected;
        event(r, "reject", in.asset_in + ">" + in.asset_out, std::string(to_string(e.code())));
        return false;
    }
}

inline void run_arbitrageur(RunState& r) {
    if (!r.config.arb.enabled) return;
    ArbitrageurAgent agent{"arb", r.config.arb.fixed_cost, r.config.arb.haircut, r.config.arb.max_exposure};
    CapacityBook caps = capacities(r);
    auto d = arbitrageur_decide(agent, r.sheet, r.pricing, r.pricing, r.params, r.config.fees, &caps);
    if (!d) return;
    if (!execute_intent(r, d->intent, agent.id, &d->quote)) return;
    ++r.totals.arb_fills;
    r.totals.arb_pnl += d->net_payoff;
    // hedge on the venues: buy what was sold to the pool, sell what was bought
    r.market.find(d->intent.asset_in)->pending_flow += d->quote.v_in.to_double();
    r.market.find(d->intent.asset_out)->pending_flow -= d->quote.v_out.to_double();
}

inline void inject_fault(RunState& r) {
    const auto& f = r.config.fault;
    if (f.kind == "none" || f.timestep != r.t) return;
    if (f.kind == "negative_tr") {
        event(r, "fault", "", "negative_tr");
        Money draw = r.treasury.balance + Money::from_double(f.amount);
        r.treasury = treasury_update(r.treasury, Money::zero(), draw);
    } else if (f.kind == "inventory_theft") {
        Units amt = min(Units::from_double(f.amount), r.sheet.pool(f.asset).inventory);
        event(r, "fault", f.asset, "inventory_theft " + amt.to_string());
        r.sheet.adjust_inventory(f.asset, -amt, r.t);
    }
}

inline void record_auction_events(RunState& r, const std::vector<AuctionEvent>& evs) {
    for (const auto& ev : evs) {
        if (!ev.upsilon.is_zero()) {
            r.sheet.transfer_reserve(ev.asset, ev.upsilon, r.t);
            r.totals.upsilon_to_reserve += ev.upsilon;
            r.table("treasury").add(r.t, "upsilon", ev.asset, ev.upsilon, ev.tr_after);
        }
        r.table("auction").add(r.t, ev.asset, to_string(ev.side), to_string(ev.regime), ev.breach_clock, ev.target,
                               ev.target_in_timesteps ? "timesteps" : "epochs", to_string(ev.comparison), ev.a_before,
                               ev.a_after, ev.capped, ev.upsilon, ev.tr_after);
    }
}

inline std::vector<AuctionInput> auction_inputs(RunState& r) {
    std::vector<AuctionInput> ins;
    for (auto& [id, a] : r.rt) {
        a.u = safe_utilisation(r.sheet.pool(id), a, r.mid(id));
        r.totals.max_utilisation = std::max({r.totals.max_utilisation, a.u.u_rhs, a.u.u_lhs});
        ins.push_back({id, r.sheet.t(id).to_double(), a.u.u_rhs, a.u.u_lhs});
    }
    return ins;
}

/// Value change since epoch open of the open inventory and of the struck notional.
inline double revaluation_bound(const RunState& r) {
    double b = 0.0;
    for (const auto& [id, a] : r.rt) {
        const Eldf& now = r.valuation.at(id).bid;
        double o = open_inventory(r.sheet.pool(id)).abs().to_double();
        double n = a.position.notional.to_double();
        b += std::abs(integrate_eldf(now, 0.0, o) - integrate_eldf(a.strike_curve, 0.0, o));
        b += std::abs(integrate_eldf(now, 0.0, n) - integrate_eldf(a.strike_curve, 0.0, n));
    }
    return b;
}

inline void record_metrics(RunState& r) {
    auto& m = r.table("metrics");
    for (const auto& [id, a] : r.rt) {
        const auto& st = r.sheet.asset(id);
        const auto& p = r.params.at(id);
        m.add(r.t, "mid", id, r.mid(id));
        m.add(r.t, "t", id, st.synthetic.t.to_double());
        m.add(r.t, "inventory", id, st.pool.inventory.to_double());
        m.add(r.t, "open_inventory", id, open_inventory(st.pool).to_double());
        m.add(r.t, "u_rhs", id, a.u.u_rhs);
        m.add(r.t, "u_lhs", id, a.u.u_lhs);
        m.add(r.t, "a_rhs", id, p.a_rhs);
        m.add(r.t, "a_lhs", id, p.a_lhs);
        m.add(r.t, "d_rhs", id, p.d_rhs);
        m.add(r.t, "d_lhs", id, p.d_lhs);
        m.add(r.t, "premium_reserve", id, st.premium_reserve.to_double());
        m.add(r.t, "impermanent_loss", id, impermanent_loss(r.config.asset(id)->mid, r.mid(id)));
    }
    Solvency sol = solvency_check(r.sheet, r.valuation);
    Money hedged = sol.surplus + r.hedge_account;
    double bound = revaluation_bound(r);
    double margin = hedged.to_double() + bound;
    r.totals.worst_solvency_margin = std::min(r.totals.worst_solvency_margin, margin);
    if (hedged.is_negative()) r.totals.max_deficit = std::max(r.totals.max_deficit, -hedged.to_double());
    if (margin < -1e-9) ++r.totals.solvency_breaches;
    m.add(r.t, "solvency_surplus", "", sol.surplus.to_double());
    m.add(r.t, "hedged_surplus", "", hedged.to_double());
    m.add(r.t, "revaluation_bound", "", bound);
    m.add(r.t, "treasury_reserve", "", r.treasury.balance.to_double());
    m.add(r.t, "hedge_account", "", r.hedge_account.to_double());
}

inline void halt(RunState& r, const Error& e) {
    r.halted = true;
    r.diagnostic = e.what();
    event(r, "halt", "", r.diagnostic);
}

} // namespace detail

inline RunState init_run(const ScenarioConfig& c) {
    RunState r;
    r.config = c;
    r.rng = Rng(c.seed);
    r.market = make_market(c);
    detail::declare_tables(r);
    for (const auto& a : c.assets) {
        r.sheet.add_asset(a.id);
        r.sheet.deposit_plp(a.id, Units::from_double(a.plp_deposit), 0);
        r.params[a.id] = RebalanceParams{c.a0_rhs, c.a0_lhs, c.d_min, c.d_min};
        AssetAuction au;
        au.rhs.a = c.a0_rhs;
        au.lhs.a = c.a0_lhs;
        for (SideAuction* sa : {&au.rhs, &au.lhs}) {
            sa->lambda = c.lambda;
            sa->a_min = c.a_min;
        }
        r.auction[a.id] = au;
        AssetRuntime rt;
        rt.long_vault = make_vault(a.id, VaultSide::long_side, Money::from_double(a.long_collateral), c.rho_long,
                                   Money::from_double(c.epsilon));
        rt.short_vault = make_vault(a.id, VaultSide::short_side, Money::from_double(a.short_collateral), c.rho_short,
                                    Money::from_double(c.epsilon));
        if (a.long_collateral > 0.0) rt.long_stakes["slp"] = a.long_collateral;
        if (a.short_collateral > 0.0) rt.short_stakes["slp"] = a.short_collateral;
        rt.long_net_deposits = rt.long_vault.collateral;
        rt.short_net_deposits = rt.short_vault.collateral;
        r.rt[a.id] = rt;
    }
    detail::refit(r, sample_venues(r.market, r.rng), true);
    for (auto& [id, a] : r.rt) {
        a.strike_curve = r.valuation.at(id).bid;
        a.position = strike_swaption(r.sheet.pool(id), a.strike_curve);
        a.struck = true;
    }
    return r;
}

inline void step_epoch(RunState& r) {
    ++r.epoch;
    const auto& c = r.config;
    struct VaultRow {
        Money before, flow, settlement, deposit;
    };
    std::map<std::pair<AssetId, VaultSide>, VaultRow> rows;
    for (auto& [id, a] : r.rt) {
        rows[{id, VaultSide::long_side}].before = a.long_vault.collateral;
        rows[{id, VaultSide::short_side}].before = a.short_vault.collateral;
    }
    auto note_liquidation = [&](const AssetId& id, const Vault& v) {
        ++r.totals.liquidations;
        detail::event(r, "liquidation", id, to_string(v.side));
    };

    for (auto& [id, a] : r.rt) {
        Vault& v = a.position.direction == SwaptionDirection::protocol_pays_fixed ? a.short_vault : a.long_vault;
        if (!c.settlement || !a.struck || !a.position.notional.is_positive() || v.liquidated) continue;
        try {
            double amt = settle_swaption(a.position, a.strike_curve, r.valuation.at(id).bid, c.settlement_basis);
            Money c0 = v.collateral;
            SettlementResult s = apply_settlement(a.position, amt, v, r.hedge_account);
            rows[{id, v.side}].settlement = v.collateral - c0;
            if (s.capped) detail::event(r, "settlement_capped", id, s.due.to_string() + " due " + s.paid.to_string() + " paid");
            if (s.liquidated) note_liquidation(id, v);
        } catch (const Error& e) {
            if (is_fatal(e.code())) throw;
            detail::event(r, "settlement_failed", id, std::string(to_string(e.code())));
        }
    }
    for (auto& [id, a] : r.rt) {
        Money t_now = r.sheet.t(id);
        bool long_was = a.long_vault.liquidated, short_was = a.short_vault.liquidated;
        PremiumFlow pf = slp_premium_flow(a.t_epoch_open.to_double(), t_now.to_double(), r.params.at(id), a.long_vault,
                                          a.short_vault);
        r.slp_premium_account -= pf.total();
        rows[{id, VaultSide::long_side}].flow = pf.to_long;
        rows[{id, VaultSide::short_side}].flow = pf.to_short;
        a.t_epoch_open = t_now;
        if (!long_was && a.long_vault.liquidated) note_liquidation(id, a.long_vault);
        if (!short_was && a.short_vault.liquidated) note_liquidation(id, a.short_vault);
    }
    for (const auto& ch : c.vault_changes) {
        if (ch.epoch != r.epoch) continue;
        auto& a = r.rt.at(ch.asset);
        bool is_long = ch.side == VaultSide::long_side;
        Vault& v = is_long ? a.long_vault : a.short_vault;
        auto& stakes = is_long ? a.long_stakes : a.short_stakes;
        Money& net = is_long ? a.long_net_deposits : a.short_net_deposits;
        Money amt = Money::from_double(ch.amount);
        if (amt.is_negative()) amt = -min(-amt, v.collateral);
        v.collateral += amt;
        net += amt;
        rows[{ch.asset, ch.side}].deposit += amt;
        stakes[ch.agent] = std::max(0.0, stakes[ch.agent] + amt.to_double());
        // fresh collateral above the floor re-arms a liquidated vault
        if (v.liquidated && amt.is_positive() && v.collateral > v.margin_floor) v.liquidated = false;
        detail::event(r, "vault_change", ch.asset, std::string(to_string(ch.side)) + " " + amt.to_string() + " " + ch.agent);
    }
    for (auto& [id, a] : r.rt) {
        a.u = detail::safe_utilisation(r.sheet.pool(id), a, r.mid(id));
        auto& p = r.params.at(id);
        p.d_rhs = cover_coefficient(a.u.u_rhs, c.d_min, c.d_max, c.u_max, c.k);
        p.d_lhs = cover_coefficient(a.u.u_lhs, c.d_min, c.d_max, c.u_max, c.k);
    }
    {
        std::vector<AuctionInput> ins;
        for (const auto& [id, a] : r.rt) ins.push_back({id, r.sheet.t(id).to_double(), a.u.u_rhs, a.u.u_lhs});
        auto evs = auction_step(r.auction, r.params, ins, c.thresholds, c.targets, r.treasury,
                                AuctionClock{r.t, true, false, c.epoch_length});
        detail::record_auction_events(r, evs);
    }
    for (auto& [id, a] : r.rt) {
        const auto& pool = r.sheet.pool(id);
        DistributionInputs in{pool.inventory.to_double(), pool.lp_inventory.to_double(), a.short_vault.capacity(r.mid(id)),
                              a.long_vault.capacity(r.mid(id))};
        std::map<LpClass, std::vector<std::pair<std::string, double>>> stakes;
        stakes[LpClass::plp] = {{"plp", pool.lp_inventory.to_double()}};
        for (const auto& [agent, w] : a.long_stakes) stakes[LpClass::slp_long].push_back({agent, w});
        for (const auto& [agent, w] : a.short_stakes) stakes[LpClass::slp_short].push_back({agent, w});
        r.rewards.distribute(id, in, c.rewards, stakes);
    }
    for (auto& [id, a] : r.rt) {
        a.strike_curve = r.valuation.at(id).bid;
        a.position = strike_swaption(r.sheet.pool(id), a.strike_curve);
        const Vault& cover = a.position.direction == SwaptionDirection::protocol_pays_fixed ? a.short_vault : a.long_vault;
        a.struck = !cover.liquidated;
        for (const Vault* v : {&a.long_vault, &a.short_vault}) {
            const VaultRow& row = rows[{id, v->side}];
            r.table("vaults").add(r.epoch, r.t, id, to_string(v->side), row.before, row.flow, row.settlement, row.deposit,
                                  v->collateral, v->liquidated);
        }
    }
}

inline void step_timestep(RunState& r) {
    const auto& c = r.config;
    auto snaps = step_external(r.market, r.rng);
    if (r.t % c.slot_length == 0) {
        ++r.slot_id;
        detail::refit(r, snaps, true);
    }
    detail::inject_fault(r);
    while (r.next_script < c.trades.size() && c.trades[r.next_script].timestep <= r.t) {
        const auto& s = c.trades[r.next_script++];
        if (s.timestep == r.t) detail::execute_intent(r, {s.asset_in, s.asset_out, s.v_in}, "script");
    }
    for (const auto& in : draw_trader_flow(c.traders, r.asset_ids(), r.rng)) detail::execute_intent(r, in, "trader");
    detail::run_arbitrageur(r);
    auto ins = detail::auction_inputs(r);
    auto evs = auction_step(r.auction, r.params, ins, c.thresholds, c.targets, r.treasury,
                            AuctionClock{r.t, false, true, c.epoch_length});
    detail::record_auction_events(r, evs);
    detail::record_metrics(r);
}

namespace detail {

inline void finish(RunState& r) {
    for (const auto& [key, amount] : r.rewards.claims()) {
        const auto& [agent, asset, cls] = key;
        r.table("claims").add(agent, asset, to_string(cls), amount);
    }
    auto& tx = r.table("transactions");
    std::int64_t seq = 0;
    for (const auto& e : r.sheet.log()) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, log_entry::PlpDeposit>) {
                    tx.add(seq, x.timestep, "plp_deposit", x.asset, "", x.amount, Units::zero(), Money::zero(), "");
                } else if constexpr (std::is_same_v<T, log_entry::PlpWithdraw>) {
                    tx.add(seq, x.timestep, "plp_withdraw", x.asset, "", Units::zero(), x.in_kind, x.paid, "");
                } else if constexpr (std::is_same_v<T, log_entry::SyntheticFlow>) {
                    tx.add(seq, x.timestep, "synthetic_flow", x.asset, "", Units::zero(), Units::zero(),
                           x.withdrawn - x.deposited, "");
                } else if constexpr (std::is_same_v<T, log_entry::Swap>) {
                    tx.add(seq, x.timestep, "swap", x.asset_in, x.asset_out, x.v_in, x.v_out, x.v_prime_s, "");
                } else if constexpr (std::is_same_v<T, log_entry::InventoryAdjust>) {
                    tx.add(seq, x.timestep, "inventory_adjust", x.asset, "", x.delta, Units::zero(), Money::zero(), "");
                } else if constexpr (std::is_same_v<T, log_entry::ReserveTransfer>) {
                    tx.add(seq, x.timestep, "reserve_transfer", x.asset, "", Units::zero(), Units::zero(), x.amount, "");
                } else {
                    tx.add(seq, x.timestep, "slot_start", x.asset, "", Units::zero(), Units::zero(), Money::zero(),
                           std::to_string(x.slot_id));
                }
            },
            e);
        ++seq;
    }

    auto& s = r.table("summary");
    const auto& t = r.totals;
    Solvency sol = r.valuation.empty() ? Solvency{} : solvency_check(r.sheet, r.valuation);
    Money residual = t.v_s - t.v_prime - t.rp - t.xi - t.reward;
    s.add("engine_version", kEngineVersion);
    s.add("seed", r.config.seed);
    s.add("horizon", r.config.horizon);
    s.add("timesteps_run", r.t);
    s.add("epochs", r.epoch);
    s.add("halted", r.halted);
    s.add("fills", t.fills);
    s.add("arb_fills", t.arb_fills);
    s.add("rejected", t.rejected);
    s.add("traded_value", t.v_s);
    s.add("final_tr", r.treasury.balance);
    s.add("cumulative_xi", r.treasury.cumulative_xi);
    s.add("cumulative_upsilon", r.treasury.cumulative_upsilon);
    s.add("premium_charged", t.rp);
    s.add("premium_reserve", r.sheet.total_premium_reserve());
    s.add("rewards_accrued", t.reward);
    s.add("rewards_claimable", r.rewards.total_claimable());
    s.add("rewards_pending", r.rewards.total_pending());
    s.add("hedge_account", r.hedge_account);
    s.add("slp_premium_account", r.slp_premium_account);
    s.add("conservation_residual", residual);
    s.add("solvency_surplus", sol.surplus);
    s.add("hedged_surplus", sol.surplus + r.hedge_account);
    s.add("worst_solvency_margin", std::isfinite(t.worst_solvency_margin) ? t.worst_solvency_margin : 0.0);
    s.add("solvency_breaches", t.solvency_breaches);
    s.add("max_deficit", t.max_deficit);
    s.add("max_utilisation", t.max_utilisation);
    s.add("liquidations", t.liquidations);
    s.add("arb_pnl", t.arb_pnl);
    s.add("d_at_u_max", cover_coefficient(r.config.u_max, r.config.d_min, r.config.d_max, r.config.u_max, r.config.k));
    for (const auto& [id, a] : r.rt) {
        s.add("t." + id, r.sheet.t(id));
        s.add("open_inventory." + id, open_inventory(r.sheet.pool(id)));
        s.add("a_rhs." + id, r.params.at(id).a_rhs);
        s.add("a_lhs." + id, r.params.at(id).a_lhs);
        s.add("slp_long_pnl." + id, a.long_vault.collateral - a.long_net_deposits);
        s.add("slp_short_pnl." + id, a.short_vault.collateral - a.short_net_deposits);
    }
}

} // namespace detail

struct RunResult {
    RunState state;

    const io::Table& table(const std::string& name) const { return state.tables.at(name); }
    std::string summary(const std::string& key) const {
        for (const auto& row : state.tables.at("summary").rows) {
            if (row[0] == key) return row[1];
        }
        return {};
    }
};

/// Runs the whole horizon. A fatal invariant breach stops the loop; everything
/// logged up to that point is kept.
inline RunResult run_scenario(const ScenarioConfig& c) {
    // configs built in code skip the file validator; catch the worst before stepping
    if (!c.fees.valid()) fail(ErrorCode::ConfigInvalid, "fees need 0 <= xi <= theta < 1");
    if (!c.thresholds.valid()) fail(ErrorCode::ConfigInvalid, "thresholds need theta0 <= theta_star <= theta_dagger <= 1");
    if (!c.targets.valid()) fail(ErrorCode::ConfigInvalid, "targets need j_star >= j_prime >= 1 and j_dagger >= 1");
    if (c.assets.size() < 2 || c.horizon < 0 || c.epoch_length < 1 || c.slot_length < 1) {
        fail(ErrorCode::ConfigInvalid, "need two assets, horizon >= 0, epoch and slot lengths >= 1");
    }
    RunResult res{init_run(c)};
    RunState& r = res.state;
    try {
        for (r.t = 0; r.t < c.horizon; ++r.t) {
            step_timestep(r);
            if ((r.t + 1) % c.epoch_length == 0) step_epoch(r);
        }
    } catch (const Error& e) {
        if (!is_fatal(e.code())) throw;
        detail::halt(r, e);
    }
    detail::finish(r);
    return res;
}

} // namespace dfmm::sim
