#pragma once

// Scenario files: sectioned key = value text.
//
//   [run]            seed, horizon, epoch_length, ...
//   [asset.ETH]      one section per asset
//   [trade.1]        scripted trades
//   [vault_change.1] queued sLP deposits (+) and withdrawals (-)
//
// '#' and ';' start comments. Every value is range-checked by validate().

#include "dfmm/auction.hpp"
#include "dfmm/error.hpp"
#include "dfmm/pricing.hpp"
#include "dfmm/treasury.hpp"
#include "dfmm/vaults.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dfmm::sim {

struct IniEntry {
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    int line = 0;
    std::map<std::string, IniEntry> entries;
};

struct IniDoc {
    std::vector<IniSection> sections;

    IniSection* find(const std::string& name) {
        for (auto& s : sections) {
            if (s.name == name) return &s;
        }
        return nullptr;
    }
    const IniSection* find(const std::string& name) const {
        for (const auto& s : sections) {
            if (s.name == name) return &s;
        }
        return nullptr;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        IniSection* s = find(section);
        if (!s) {
            sections.push_back({section, 0, {}});
            s = &sections.back();
        }
        s->entries[key] = {value, 0};
    }

    /// Sorted, comment-free rendering; the config hash is taken over this.
    std::string canonical() const {
        std::map<std::string, std::map<std::string, std::string>> sorted;
        for (const auto& s : sections) {
            for (const auto& [k, e] : s.entries) sorted[s.name][k] = e.value;
        }
        std::string out;
        for (const auto& [name, kv] : sorted) {
            out += "[" + name + "]\n";
            for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
        }
        return out;
    }
};

namespace detail {
inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}
} // namespace detail

inline IniDoc parse_ini(const std::string& text) {
    IniDoc doc;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    IniSection* cur = nullptr;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad section header");
            std::string name = detail::trim(std::string_view(s).substr(1, s.size() - 2));
            if (doc.find(name)) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": duplicate section [" + name + "]");
            doc.sections.push_back({name, line, {}});
            cur = &doc.sections.back();
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected key = value");
        if (!cur) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": key outside any section");
        std::string key = detail::trim(std::string_view(s).substr(0, eq));
        std::string value = detail::trim(std::string_view(s).substr(eq + 1));
        if (key.empty()) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": empty key");
        if (cur->entries.count(key)) {
            fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": duplicate key " + cur->name + "." + key);
        }
        cur->entries[key] = {value, line};
    }
    return doc;
}

inline IniDoc load_ini(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_ini(ss.str());
}

// ------------------------------------------------------------------ scenario

struct AssetConfig {
    AssetId id;
    double mid = 1.0;
    double sigma = 0.0; // per-timestep log volatility
    double drift = 0.0; // per-timestep log drift
    double impact = 0.0;
    double spread = 0.001; // half-spread at zero depth
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    int venues = 3;
    double jitter = 0.0; // relative spread/slope noise between venues
    double depth = 1000.0;
    int points = 16;
    double plp_deposit = 1000.0;
    double long_collateral = 0.0;
    double short_collateral = 0.0;
};

struct ScriptedTrade {
    std::int64_t timestep = 0;
    AssetId asset_in;
    AssetId asset_out;
    double v_in = 0.0;
};

struct VaultChange {
    std::int64_t epoch = 0;
    AssetId asset;
    VaultSide side = VaultSide::short_side;
    double amount = 0.0;
    std::string agent = "slp";
};

struct TraderConfig {
    std::string mode = "poisson"; // poisson | none
    double rate = 1.0;            // arrivals per timestep
    double size_mu = 0.0;         // log size, asset units
    double size_sigma = 0.5;
    AssetId prefer_out; // asset traders lean toward buying
    double preference = 0.0;
};

struct ArbConfig {
    bool enabled = true;
    double fixed_cost = 0.0;
    double haircut = 0.0;
    double max_exposure = 1e12;
};

struct FaultConfig {
    std::string kind = "none"; // none | negative_tr | inventory_theft
    std::int64_t timestep = -1;
    AssetId asset;
    double amount = 0.0;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::int64_t horizon = 100;
    std::int64_t epoch_length = 10;
    std::int64_t slot_length = 1;
    bool settlement = true;
    SettlementBasis settlement_basis = SettlementBasis::value;
    bool write_snapshots = true;

    FeeSchedule fees{0.003, 0.001};

    double a0_rhs = 1.0;
    double a0_lhs = 1.0;
    double a_min = 0.0;
    double lambda = 1.0;
    RegimeThresholds thresholds;
    RebalanceTargets targets;

    double d_min = 0.001;
    double d_max = 0.01;
    double u_max = 1.0;
    double k = 2.0;

    double rho_long = 0.5;
    double rho_short = 0.5;
    double epsilon = 0.0;

    DistributionParams rewards;
    TraderConfig traders;
    ArbConfig arb;
    FaultConfig fault;

    std::vector<AssetConfig> assets;
    std::vector<ScriptedTrade> trades;
    std::vector<VaultChange> vault_changes;

    const AssetConfig* asset(const AssetId& id) const {
        for (const auto& a : assets) {
            if (a.id == id) return &a;
        }
        return nullptr;
    }
};

struct Violation {
    std::string field;
    std::string message;
    int line = 0;

    std::string to_string() const {
        std::string s = field + ": " + message;
        if (line > 0) s += " (line " + std::to_string(line) + ")";
        return s;
    }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"run", {"seed", "horizon", "epoch_length", "slot_length", "settlement", "settlement_basis", "write_snapshots"}},
        {"fees", {"theta", "xi"}},
        {"auction", {"a0", "a0_rhs", "a0_lhs", "a_min", "lambda", "theta0", "theta_star", "theta_dagger", "j_star",
                     "j_prime", "j_dagger"}},
        {"cover", {"d_min", "d_max", "u_max", "k"}},
        {"vaults", {"rho_long", "rho_short", "epsilon"}},
        {"rewards", {"gamma", "alpha", "k"}},
        {"traders", {"mode", "rate", "size_mu", "size_sigma", "prefer_out", "preference"}},
        {"arbitrageur", {"enabled", "fixed_cost", "haircut", "max_exposure"}},
        {"fault", {"kind", "timestep", "asset", "amount"}},
        {"asset", {"mid", "sigma", "drift", "impact", "spread", "kappa1", "kappa2", "venues", "jitter", "depth",
                   "points", "plp_deposit", "long_collateral", "short_collateral"}},
        {"trade", {"timestep", "asset_in", "asset_out", "v_in"}},
        {"vault_change", {"epoch", "asset", "side", "amount", "agent"}},
    };
    return keys;
}

// "asset.ETH" -> "asset"; plain sections map to themselves
inline std::string section_kind(const std::string& name) {
    auto dot = name.find('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

class Reader {
public:
    explicit Reader(std::vector<Violation>& out) : out_(out) {}

    template <typename T>
    void get(const IniSection& s, const std::string& key, T& dst) {
        auto it = s.entries.find(key);
        if (it == s.entries.end()) return;
        const std::string& v = it->second.value;
        std::string field = s.name + "." + key;
        if constexpr (std::is_same_v<T, std::string>) {
            dst = v;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (v == "true" || v == "on" || v == "1" || v == "yes") dst = true;
            else if (v == "false" || v == "off" || v == "0" || v == "no") dst = false;
            else out_.push_back({field, "expected a boolean, got '" + v + "'", it->second.line});
        } else if constexpr (std::is_floating_point_v<T>) {
            double x = 0.0;
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x)) {
                out_.push_back({field, "expected a number, got '" + v + "'", it->second.line});
            } else {
                dst = x;
            }
        } else {
            T x{};
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc{} || p != v.data() + v.size()) {
                out_.push_back({field, "expected an integer, got '" + v + "'", it->second.line});
            } else {
                dst = x;
            }
        }
    }

private:
    std::vector<Violation>& out_;
};

inline int line_of(const IniDoc& doc, const std::string& section, const std::string& key) {
    const IniSection* s = doc.find(section);
    if (!s) return 0;
    auto it = s->entries.find(key);
    return it == s->entries.end() ? s->line : it->second.line;
}

} // namespace detail

/// True when `section.key` names a settable parameter (asset sections take any id).
inline bool is_known_key(const std::string& section, const std::string& key) {
    const auto& keys = detail::known_keys();
    auto it = keys.find(detail::section_kind(section));
    if (it == keys.end()) return false;
    bool indexed = it->first == "asset" || it->first == "trade" || it->first == "vault_change";
    if (indexed != (section.find('.') != std::string::npos)) return false;
    return it->second.count(key) != 0;
}

struct LoadResult {
    ScenarioConfig config;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

inline void validate(const ScenarioConfig& c, const IniDoc& doc, std::vector<Violation>& v) {
    auto bad = [&](const std::string& section, const std::string& key, const std::string& msg) {
        v.push_back({section + "." + key, msg, detail::line_of(doc, section, key)});
    };
    if (c.horizon < 0) bad("run", "horizon", "must be >= 0");
    if (c.epoch_length < 1) bad("run", "epoch_length", "must be >= 1");
    if (c.slot_length < 1) bad("run", "slot_length", "must be >= 1");
    if (c.slot_length > c.epoch_length) bad("run", "slot_length", "must not exceed epoch_length");

    if (!(c.fees.theta >= 0.0 && c.fees.theta < 1.0)) bad("fees", "theta", "must be in [0, 1)");
    if (!(c.fees.xi >= 0.0 && c.fees.xi < 1.0)) bad("fees", "xi", "must be in [0, 1)");
    if (c.fees.xi > c.fees.theta) {
        v.push_back({"fees.xi", "fees.xi must not exceed fees.theta", detail::line_of(doc, "fees", "xi")});
    }

    if (!(c.a_min >= 0.0)) bad("auction", "a_min", "must be >= 0");
    if (c.a0_rhs < c.a_min) bad("auction", "a0_rhs", "initial aggressiveness below auction.a_min");
    if (c.a0_lhs < c.a_min) bad("auction", "a0_lhs", "initial aggressiveness below auction.a_min");
    if (!(c.lambda >= 0.0)) bad("auction", "lambda", "must be >= 0");
    for (auto [key, val] : {std::pair{"theta0", c.thresholds.theta0}, std::pair{"theta_star", c.thresholds.theta_star},
                            std::pair{"theta_dagger", c.thresholds.theta_dagger}}) {
        if (!(val >= 0.0 && val <= 1.0)) bad("auction", key, "must be in [0, 1]");
    }
    if (c.thresholds.theta_star < c.thresholds.theta0) {
        bad("auction", "theta_star", "threshold ordering requires theta0 <= theta_star");
    }
    if (c.thresholds.theta_dagger < c.thresholds.theta_star) {
        bad("auction", "theta_dagger", "threshold ordering requires theta_star <= theta_dagger");
    }
    if (c.targets.j_prime < 1) bad("auction", "j_prime", "must be >= 1");
    if (c.targets.j_dagger < 1) bad("auction", "j_dagger", "must be >= 1");
    if (c.targets.j_star < c.targets.j_prime) bad("auction", "j_star", "target ordering requires j_star >= j_prime");

    if (!(c.d_min > 0.0)) bad("cover", "d_min", "must be > 0");
    if (c.d_max < c.d_min) bad("cover", "d_max", "must be >= cover.d_min");
    if (!(c.u_max > 0.0)) bad("cover", "u_max", "must be > 0");
    if (!(c.k > 0.0)) bad("cover", "k", "must be > 0");

    if (!(c.rho_long > 0.0 && c.rho_long <= 1.0)) bad("vaults", "rho_long", "must be in (0, 1]");
    if (!(c.rho_short > 0.0 && c.rho_short <= 1.0)) bad("vaults", "rho_short", "must be in (0, 1]");
    if (!(c.epsilon >= 0.0)) bad("vaults", "epsilon", "must be >= 0");

    if (!(c.rewards.gamma >= 0.0 && c.rewards.gamma <= 1.0)) bad("rewards", "gamma", "must be in [0, 1]");
    if (!(c.rewards.alpha >= 0.0)) bad("rewards", "alpha", "must be >= 0");
    if (!(c.rewards.k >= 0.0 && c.rewards.k <= 1.0)) bad("rewards", "k", "must be in [0, 1]");

    if (c.traders.mode != "poisson" && c.traders.mode != "none") bad("traders", "mode", "must be poisson or none");
    if (!(c.traders.rate >= 0.0 && c.traders.rate <= 1000.0)) bad("traders", "rate", "must be in [0, 1000]");
    if (!(c.traders.size_sigma >= 0.0)) bad("traders", "size_sigma", "must be >= 0");
    if (!(c.traders.preference >= 0.0 && c.traders.preference <= 1.0)) bad("traders", "preference", "must be in [0, 1]");
    if (!c.traders.prefer_out.empty() && !c.asset(c.traders.prefer_out)) bad("traders", "prefer_out", "unknown asset");

    if (!(c.arb.fixed_cost >= 0.0)) bad("arbitrageur", "fixed_cost", "must be >= 0");
    if (!(c.arb.haircut >= 0.0 && c.arb.haircut < 1.0)) bad("arbitrageur", "haircut", "must be in [0, 1)");
    if (!(c.arb.max_exposure > 0.0)) bad("arbitrageur", "max_exposure", "must be > 0");

    if (c.fault.kind != "none" && c.fault.kind != "negative_tr" && c.fault.kind != "inventory_theft") {
        bad("fault", "kind", "must be none, negative_tr or inventory_theft");
    }
    if (c.fault.kind == "inventory_theft") {
        if (!c.asset(c.fault.asset)) bad("fault", "asset", "unknown asset");
        if (!(c.fault.amount > 0.0)) bad("fault", "amount", "must be > 0");
    }
    if (c.fault.kind == "negative_tr" && !(c.fault.amount > 0.0)) bad("fault", "amount", "must be > 0");

    if (c.assets.size() < 2) v.push_back({"asset", "at least two [asset.<id>] sections are required", 0});
    for (const auto& a : c.assets) {
        std::string sec = "asset." + a.id;
        if (!(a.mid > 0.0)) bad(sec, "mid", "must be > 0");
        if (!(a.sigma >= 0.0)) bad(sec, "sigma", "must be >= 0");
        if (!(a.impact >= 0.0)) bad(sec, "impact", "must be >= 0");
        if (!(a.spread >= 0.0 && a.spread < 1.0)) bad(sec, "spread", "must be in [0, 1)");
        if (!(a.kappa1 >= 0.0)) bad(sec, "kappa1", "must be >= 0");
        if (!(a.kappa2 >= 0.0)) bad(sec, "kappa2", "must be >= 0");
        if (a.venues < 1 || a.venues > 64) bad(sec, "venues", "must be in [1, 64]");
        if (!(a.jitter >= 0.0 && a.jitter < 1.0)) bad(sec, "jitter", "must be in [0, 1)");
        if (!(a.depth > 0.0)) bad(sec, "depth", "must be > 0");
        if (a.points < 3 || a.points > 512) bad(sec, "points", "must be in [3, 512]");
        double worst = (1.0 + a.jitter) * (a.spread + a.kappa1 * a.depth + a.kappa2 * a.depth * a.depth);
        if (!(worst < 1.0)) bad(sec, "depth", "bid prices turn nonpositive within the sampled depth");
        if (!(a.plp_deposit > 0.0)) bad(sec, "plp_deposit", "must be > 0");
        if (!(a.long_collateral >= 0.0)) bad(sec, "long_collateral", "must be >= 0");
        if (!(a.short_collateral >= 0.0)) bad(sec, "short_collateral", "must be >= 0");
    }
    for (std::size_t i = 0; i < c.trades.size(); ++i) {
        const auto& t = c.trades[i];
        if (!c.asset(t.asset_in) || !c.asset(t.asset_out) || t.asset_in == t.asset_out) {
            v.push_back({"trade", "scripted trade " + std::to_string(i + 1) + " needs two distinct known assets", 0});
        }
        if (!(t.v_in > 0.0)) v.push_back({"trade", "scripted trade " + std::to_string(i + 1) + " needs v_in > 0", 0});
        if (t.timestep < 0) v.push_back({"trade", "scripted trade " + std::to_string(i + 1) + " has a negative timestep", 0});
    }
    for (std::size_t i = 0; i < c.vault_changes.size(); ++i) {
        const auto& ch = c.vault_changes[i];
        if (!c.asset(ch.asset)) v.push_back({"vault_change", "change " + std::to_string(i + 1) + " names an unknown asset", 0});
        if (ch.epoch < 1) v.push_back({"vault_change", "change " + std::to_string(i + 1) + " needs epoch >= 1", 0});
        if (ch.amount == 0.0) v.push_back({"vault_change", "change " + std::to_string(i + 1) + " has zero amount", 0});
    }
}

inline LoadResult load_config(const IniDoc& doc) {
    LoadResult r;
    auto& c = r.config;
    auto& v = r.violations;
    detail::Reader rd(v);

    for (const auto& s : doc.sections) {
        std::string kind = detail::section_kind(s.name);
        auto kit = detail::known_keys().find(kind);
        if (kit == detail::known_keys().end()) {
            v.push_back({s.name, "unknown section", s.line});
            continue;
        }
        for (const auto& [key, e] : s.entries) {
            if (!is_known_key(s.name, key)) v.push_back({s.name + "." + key, "unknown key", e.line});
        }
        if (kind == "run") {
            rd.get(s, "seed", c.seed);
            rd.get(s, "horizon", c.horizon);
            rd.get(s, "epoch_length", c.epoch_length);
            rd.get(s, "slot_length", c.slot_length);
            rd.get(s, "settlement", c.settlement);
            rd.get(s, "write_snapshots", c.write_snapshots);
            std::string basis = "value";
            rd.get(s, "settlement_basis", basis);
            if (basis == "value") c.settlement_basis = SettlementBasis::value;
            else if (basis == "units") c.settlement_basis = SettlementBasis::units;
            else v.push_back({"run.settlement_basis", "must be value or units", detail::line_of(doc, "run", "settlement_basis")});
        } else if (kind == "fees") {
            rd.get(s, "theta", c.fees.theta);
            rd.get(s, "xi", c.fees.xi);
        } else if (kind == "auction") {
            double a0 = -1.0;
            rd.get(s, "a0", a0);
            if (a0 >= 0.0) c.a0_rhs = c.a0_lhs = a0;
            rd.get(s, "a0_rhs", c.a0_rhs);
            rd.get(s, "a0_lhs", c.a0_lhs);
            rd.get(s, "a_min", c.a_min);
            rd.get(s, "lambda", c.lambda);
            rd.get(s, "theta0", c.thresholds.theta0);
            rd.get(s, "theta_star", c.thresholds.theta_star);
            rd.get(s, "theta_dagger", c.thresholds.theta_dagger);
            rd.get(s, "j_star", c.targets.j_star);
            rd.get(s, "j_prime", c.targets.j_prime);
            rd.get(s, "j_dagger", c.targets.j_dagger);
        } else if (kind == "cover") {
            rd.get(s, "d_min", c.d_min);
            rd.get(s, "d_max", c.d_max);
            rd.get(s, "u_max", c.u_max);
            rd.get(s, "k", c.k);
        } else if (kind == "vaults") {
            rd.get(s, "rho_long", c.rho_long);
            rd.get(s, "rho_short", c.rho_short);
            rd.get(s, "epsilon", c.epsilon);
        } else if (kind == "rewards") {
            rd.get(s, "gamma", c.rewards.gamma);
            rd.get(s, "alpha", c.rewards.alpha);
            rd.get(s, "k", c.rewards.k);
        } else if (kind == "traders") {
            rd.get(s, "mode", c.traders.mode);
            rd.get(s, "rate", c.traders.rate);
            rd.get(s, "size_mu", c.traders.size_mu);
            rd.get(s, "size_sigma", c.traders.size_sigma);
            rd.get(s, "prefer_out", c.traders.prefer_out);
            rd.get(s, "preference", c.traders.preference);
        } else if (kind == "arbitrageur") {
            rd.get(s, "enabled", c.arb.enabled);
            rd.get(s, "fixed_cost", c.arb.fixed_cost);
            rd.get(s, "haircut", c.arb.haircut);
            rd.get(s, "max_exposure", c.arb.max_exposure);
        } else if (kind == "fault") {
            rd.get(s, "kind", c.fault.kind);
            rd.get(s, "timestep", c.fault.timestep);
            rd.get(s, "asset", c.fault.asset);
            rd.get(s, "amount", c.fault.amount);
        } else if (kind == "asset") {
            AssetConfig a;
            a.id = s.name.substr(6);
            if (a.id.empty() || a.id.find_first_of(" ,\t") != std::string::npos) {
                v.push_back({s.name, "asset id must be nonempty without spaces or commas", s.line});
            }
            rd.get(s, "mid", a.mid);
            rd.get(s, "sigma", a.sigma);
            rd.get(s, "drift", a.drift);
            rd.get(s, "impact", a.impact);
            rd.get(s, "spread", a.spread);
            rd.get(s, "kappa1", a.kappa1);
            rd.get(s, "kappa2", a.kappa2);
            rd.get(s, "venues", a.venues);
            rd.get(s, "jitter", a.jitter);
            rd.get(s, "depth", a.depth);
            rd.get(s, "points", a.points);
            rd.get(s, "plp_deposit", a.plp_deposit);
            rd.get(s, "long_collateral", a.long_collateral);
            rd.get(s, "short_collateral", a.short_collateral);
            c.assets.push_back(a);
        } else if (kind == "trade") {
            ScriptedTrade t;
            rd.get(s, "timestep", t.timestep);
            rd.get(s, "asset_in", t.asset_in);
            rd.get(s, "asset_out", t.asset_out);
            rd.get(s, "v_in", t.v_in);
            c.trades.push_back(t);
        } else if (kind == "vault_change") {
            VaultChange ch;
            rd.get(s, "epoch", ch.epoch);
            rd.get(s, "asset", ch.asset);
            rd.get(s, "amount", ch.amount);
            rd.get(s, "agent", ch.agent);
            std::string side = "short";
            rd.get(s, "side", side);
            if (side == "long") ch.side = VaultSide::long_side;
            else if (side == "short") ch.side = VaultSide::short_side;
            else v.push_back({s.name + ".side", "must be long or short", detail::line_of(doc, s.name, "side")});
            c.vault_changes.push_back(ch);
        }
    }
    std::stable_sort(c.trades.begin(), c.trades.end(),
                     [](const ScriptedTrade& a, const ScriptedTrade& b) { return a.timestep < b.timestep; });
    validate(c, doc, v);
    return r;
}

inline LoadResult load_config_file(const std::string& path) { return load_config(load_ini(path)); }

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace dfmm::sim
