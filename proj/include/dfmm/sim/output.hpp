#pragma once

// Run directories: one delimited file per log kind plus manifest.json with the
// config hash, seed, engine version, per-file row counts and wall-clock time.

#include "dfmm/error.hpp"
#include "dfmm/io/table.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/engine.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace dfmm::sim {

// Fixed file order keeps manifests stable.
inline const std::vector<std::string>& log_kinds() {
    static const std::vector<std::string> kinds = {"fills",   "transactions", "vaults", "auction",   "treasury", "claims",
                                                   "metrics", "curves",       "events", "snapshots", "summary"};
    return kinds;
}

inline bool is_log_kind(const std::string& k) {
    for (const auto& x : log_kinds()) {
        if (x == k) return true;
    }
    return false;
}

inline std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_hash(const IniDoc& doc) { return hex64(fnv1a(doc.canonical())); }

inline nlohmann::json write_run(const RunResult& res, const std::string& dir, const std::string& hash,
                                std::int64_t wall_clock_ms) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
    nlohmann::json files = nlohmann::json::array();
    for (const auto& kind : log_kinds()) {
        const io::Table& t = res.table(kind);
        std::string file = kind + ".csv";
        io::write_file((fs::path(dir) / file).string(), io::render(t));
        files.push_back({{"kind", kind}, {"path", file}, {"rows", t.rows.size()}, {"schema", t.schema_version}});
    }
    nlohmann::json m = {{"engine_version", kEngineVersion},
                        {"config_hash", hash},
                        {"seed", res.state.config.seed},
                        {"horizon", res.state.config.horizon},
                        {"halted", res.state.halted},
                        {"diagnostic", res.state.diagnostic},
                        {"files", files},
                        {"wall_clock_ms", wall_clock_ms}};
    io::write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
    return m;
}

/// Loads and checks a manifest: every listed file must exist with the listed row count.
inline nlohmann::json read_manifest(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path p = fs::path(dir) / "manifest.json";
    if (!fs::exists(p)) fail(ErrorCode::CorruptManifest, "no manifest.json in " + dir);
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(io::read_file(p.string()));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptManifest, std::string("manifest.json does not parse: ") + e.what());
    }
    if (!m.contains("files") || !m["files"].is_array()) fail(ErrorCode::CorruptManifest, "manifest has no file list");
    for (const auto& f : m["files"]) {
        if (!f.contains("path") || !f.contains("rows") || !f.contains("kind")) {
            fail(ErrorCode::CorruptManifest, "manifest file entry is incomplete");
        }
        fs::path fp = fs::path(dir) / f["path"].get<std::string>();
        if (!fs::exists(fp)) fail(ErrorCode::CorruptManifest, "listed file missing: " + fp.string());
        io::Table t = io::read_table(fp.string());
        if (t.rows.size() != f["rows"].get<std::size_t>()) {
            fail(ErrorCode::CorruptManifest, fp.string() + " row count differs from manifest");
        }
    }
    return m;
}

} // namespace dfmm::sim
