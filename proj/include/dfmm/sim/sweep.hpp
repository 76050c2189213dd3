#pragma once

// Parameter sweeps: the cartesian product of a grid, one independent run per
// point, summarised one row per point in grid order.
//
//   cover.k=1,2,3;asset.ETH.sigma=0.01,0.02

#include "dfmm/error.hpp"
#include "dfmm/io/table.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/engine.hpp"
#include "dfmm/sim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

namespace dfmm::sim {

struct GridAxis {
    std::string section;
    std::string key;
    std::vector<std::string> values;

    std::string name() const { return section + "." + key; }
};

inline std::vector<GridAxis> parse_grid(const std::string& text, const IniDoc& doc) {
    std::vector<GridAxis> axes;
    for (const auto& part : io::split(text, ';')) {
        std::string item = detail::trim(part);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ConfigInvalid, "grid item '" + item + "' needs name=v1,v2");
        std::string name = detail::trim(std::string_view(item).substr(0, eq));
        auto dot = name.rfind('.');
        if (dot == std::string::npos) fail(ErrorCode::ConfigInvalid, "grid key '" + name + "' needs section.key");
        GridAxis ax{name.substr(0, dot), name.substr(dot + 1), {}};
        if (!is_known_key(ax.section, ax.key)) fail(ErrorCode::ConfigInvalid, "unknown grid key '" + name + "'");
        if (ax.section.find('.') != std::string::npos && !doc.find(ax.section)) {
            fail(ErrorCode::ConfigInvalid, "grid key '" + name + "' names a section the config does not have");
        }
        for (const auto& v : io::split(item.substr(eq + 1), ',')) {
            std::string t = detail::trim(v);
            if (t.empty()) fail(ErrorCode::ConfigInvalid, "empty value in grid item '" + item + "'");
            ax.values.push_back(t);
        }
        for (const auto& other : axes) {
            if (other.name() == ax.name()) fail(ErrorCode::ConfigInvalid, "grid key '" + name + "' repeated");
        }
        axes.push_back(std::move(ax));
    }
    if (axes.empty()) fail(ErrorCode::ConfigInvalid, "empty grid");
    return axes;
}

/// Grid points in order, first axis slowest.
inline std::vector<std::vector<std::string>> expand_grid(const std::vector<GridAxis>& axes) {
    std::vector<std::vector<std::string>> pts{{}};
    for (const auto& ax : axes) {
        std::vector<std::vector<std::string>> next;
        for (const auto& p : pts) {
            for (const auto& v : ax.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        pts = std::move(next);
    }
    return pts;
}

// Point 0 keeps the base seed so a one-point sweep reproduces a plain run.
inline std::uint64_t derive_seed(std::uint64_t base, std::size_t index) {
    if (index == 0) return base;
    return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(index)));
}

inline std::string cell_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct SweepPoint {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> values;
    std::string status;
    std::vector<std::pair<std::string, std::string>> summary;
};

inline SweepPoint run_point(const IniDoc& base, const std::vector<GridAxis>& axes, const std::vector<std::string>& values,
                            std::size_t index, std::uint64_t base_seed) {
    SweepPoint pt{index, derive_seed(base_seed, index), values, "ok", {}};
    IniDoc doc = base;
    for (std::size_t i = 0; i < axes.size(); ++i) doc.set(axes[i].section, axes[i].key, values[i]);
    try {
        LoadResult lr = load_config(doc);
        if (!lr.ok()) {
            pt.status = "invalid: " + cell_safe(lr.violations.front().to_string());
            return pt;
        }
        lr.config.seed = pt.seed;
        RunResult res = run_scenario(lr.config);
        if (res.state.halted) pt.status = "halted: " + cell_safe(res.state.diagnostic);
        for (const auto& row : res.table("summary").rows) pt.summary.push_back({row[0], row[1]});
    } catch (const Error& e) {
        pt.status = "error: " + cell_safe(e.what());
    }
    return pt;
}

inline io::Table run_sweep(const IniDoc& base, const std::vector<GridAxis>& axes, std::uint64_t base_seed, unsigned jobs) {
    auto points = expand_grid(axes);
    std::vector<SweepPoint> out(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) out[i] = run_point(base, axes, points[i], i, base_seed);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    io::Table t{"sweep", 1, {"index", "point_seed"}, {}};
    for (const auto& ax : axes) t.columns.push_back(ax.name());
    t.columns.push_back("status");
    std::vector<std::string> keys;
    for (const auto& p : out) {
        if (!p.summary.empty()) {
            for (const auto& kv : p.summary) keys.push_back(kv.first);
            break;
        }
    }
    for (const auto& k : keys) t.columns.push_back(k);
    for (const auto& p : out) {
        std::vector<std::string> row{std::to_string(p.index), std::to_string(p.seed)};
        for (const auto& v : p.values) row.push_back(cell_safe(v));
        row.push_back(p.status);
        for (const auto& k : keys) {
            std::string cell;
            for (const auto& kv : p.summary) {
                if (kv.first == k) cell = kv.second;
            }
            row.push_back(cell_safe(cell));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace dfmm::sim
