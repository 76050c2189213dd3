#include "dfmm/error.hpp"
#include "dfmm/io/table.hpp"
#include "dfmm/sim/config.hpp"
#include "dfmm/sim/engine.hpp"
#include "dfmm/sim/output.hpp"
#include "dfmm/sim/sweep.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

using namespace dfmm;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kBreach = 3;
constexpr int kIo = 4;

int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::IoError:
    case ErrorCode::CorruptManifest: return kIo;
    default: break;
    }
    if (is_fatal(c)) return kBreach;
    return kInvalid;
}

// Parses and validates; prints itemised violations.
std::optional<sim::LoadResult> load_checked(const std::string& path, sim::IniDoc& doc) {
    doc = sim::load_ini(path);
    sim::LoadResult lr = sim::load_config(doc);
    if (!lr.ok()) {
        for (const auto& v : lr.violations) std::cerr << path << ": " << v.to_string() << "\n";
        return std::nullopt;
    }
    return lr;
}

int cmd_validate(const std::string& path) {
    sim::IniDoc doc;
    auto lr = load_checked(path, doc);
    if (!lr) return kInvalid;
    std::cout << path << ": ok (" << lr->config.assets.size() << " assets, horizon " << lr->config.horizon << ")\n";
    return kOk;
}

std::string default_out(const std::string& cfg, std::uint64_t seed) {
    const char* root = std::getenv("DFMM_OUT_ROOT");
    std::filesystem::path base = root && *root ? root : "runs";
    return (base / (std::filesystem::path(cfg).stem().string() + "-" + std::to_string(seed))).string();
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::string out) {
    sim::IniDoc doc;
    auto lr = load_checked(path, doc);
    if (!lr) return kInvalid;
    if (seed) lr->config.seed = *seed;
    if (out.empty()) out = default_out(path, lr->config.seed);
    auto t0 = std::chrono::steady_clock::now();
    sim::RunResult res = sim::run_scenario(lr->config);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    sim::write_run(res, out, sim::config_hash(doc), ms);
    std::cout << "wrote " << out << " (" << res.summary("timesteps_run") << " timesteps, " << res.summary("fills")
              << " fills)\n";
    if (res.state.halted) {
        std::cerr << "halted: " << res.state.diagnostic << "\n";
        return kBreach;
    }
    return kOk;
}

int cmd_sweep(const std::string& path, const std::string& grid, unsigned jobs, std::string out) {
    sim::IniDoc doc;
    auto lr = load_checked(path, doc);
    if (!lr) return kInvalid;
    auto axes = sim::parse_grid(grid, doc);
    io::Table t = sim::run_sweep(doc, axes, lr->config.seed, jobs);
    std::string text = io::render(t);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::filesystem::create_directories(std::filesystem::path(out).parent_path().empty()
                                                ? std::filesystem::path(".")
                                                : std::filesystem::path(out).parent_path());
        io::write_file(out, text);
        std::cout << "wrote " << out << " (" << t.rows.size() << " points)\n";
    }
    return kOk;
}

bool row_matches_asset(const io::Table& t, const std::vector<std::string>& row, const std::string& asset) {
    for (const char* c : {"asset", "asset_in", "asset_out", "counter_asset", "context"}) {
        int i = t.column(c);
        if (i >= 0 && row[static_cast<std::size_t>(i)] == asset) return true;
    }
    return false;
}

int cmd_inspect(const std::string& dir, const std::string& kind, const std::string& asset, std::optional<std::int64_t> from,
                std::optional<std::int64_t> to) {
    nlohmann::json m = sim::read_manifest(dir);
    std::string file;
    for (const auto& f : m["files"]) {
        if (f["kind"] == kind) file = f["path"].get<std::string>();
    }
    if (!sim::is_log_kind(kind) || file.empty()) fail(ErrorCode::UnknownLogKind, "no log kind '" + kind + "'");
    io::Table t = io::read_table((std::filesystem::path(dir) / file).string());
    int ts = t.column("timestep");
    io::Table outt{t.name, t.schema_version, t.columns, {}};
    for (const auto& row : t.rows) {
        if (!asset.empty() && !row_matches_asset(t, row, asset)) continue;
        if (ts >= 0 && (from || to)) {
            std::int64_t x = std::stoll(row[static_cast<std::size_t>(ts)]);
            if (from && x < *from) continue;
            if (to && x > *to) continue;
        }
        outt.rows.push_back(row);
    }
    std::cout << io::render(outt);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dfmm: simulate a dynamic-curve market maker with sLP vaults and a rebalancing auction"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 2 invalid config or query, 3 fatal invariant breach, 4 I/O or corrupt manifest.\n"
               "DFMM_OUT_ROOT sets the default output root for `run` (default ./runs).");

    std::string cfg, dir, grid, kind, asset, out;
    std::uint64_t seed = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::int64_t from = 0, to = 0;

    auto* v = app.add_subcommand("validate", "check a scenario config and list every violation");
    v->add_option("config", cfg, "scenario file")->required();

    auto* r = app.add_subcommand("run", "run a scenario and write its logs and manifest");
    r->add_option("config", cfg, "scenario file")->required();
    auto* seed_opt = r->add_option("--seed", seed, "override the config seed");
    r->add_option("--out", out, "output directory (default $DFMM_OUT_ROOT/<config>-<seed>)");

    auto* s = app.add_subcommand("sweep", "run every point of a parameter grid");
    s->add_option("config", cfg, "base scenario file")->required();
    s->add_option("--grid", grid, "grid, e.g. \"cover.k=1,2,3;fees.theta=0.003,0.004\"")->required();
    s->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
    s->add_option("--out", out, "write the summary table here instead of stdout");

    auto* in = app.add_subcommand("inspect", "print rows of one log, optionally filtered");
    in->add_option("dir", dir, "run directory")->required();
    in->add_option("--log", kind, "log kind: fills, transactions, vaults, auction, treasury, claims, metrics, curves, "
                                  "events, snapshots, summary")
        ->required();
    in->add_option("--asset", asset, "keep rows that mention this asset");
    auto* from_opt = in->add_option("--from", from, "first timestep (inclusive)");
    auto* to_opt = in->add_option("--to", to, "last timestep (inclusive)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*v) return cmd_validate(cfg);
        if (*r) return cmd_run(cfg, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt, out);
        if (*s) return cmd_sweep(cfg, grid, jobs, out);
        if (*in) {
            return cmd_inspect(dir, kind, asset, *from_opt ? std::optional<std::int64_t>(from) : std::nullopt,
                               *to_opt ? std::optional<std::int64_t>(to) : std::nullopt);
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kOk;
}
