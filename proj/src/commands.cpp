#include "nlmaxwell/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "nlmaxwell/errors.hpp"
#include "nlmaxwell/limit_harness.hpp"
#include "nlmaxwell/solver_full.hpp"
#include "nlmaxwell/solver_qs.hpp"

namespace nlmaxwell {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::optional<Command> parse_command(const std::string& name) {
    if (name == "run") return Command::run;
    if (name == "sweep") return Command::sweep;
    if (name == "mms") return Command::mms;
    if (name == "validate-graph") return Command::validate_graph;
    return std::nullopt;
}

std::string to_string(Command command) {
    switch (command) {
        case Command::run: return "run";
        case Command::sweep: return "sweep";
        case Command::mms: return "mms";
        case Command::validate_graph: return "validate-graph";
    }
    return "unknown";
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Tracks artifacts written during one command.
class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

    fs::path path(const std::string& rel) const { return dir_ / rel; }

    void write(const std::string& rel, const std::string& content, bool is_volatile = false) {
        const fs::path p = path(rel);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream os(p, std::ios::binary);
        os << content;
        if (!os) throw Error("write failed: " + p.string());
        add(rel, is_volatile);
    }
    /// Registers a file written by a library routine.
    void add(const std::string& rel, bool is_volatile = false) { files_.push_back({rel, is_volatile}); }

    json listing() const {
        json out = json::array();
        for (const auto& [rel, vol] : files_) {
            const std::string bytes = read_file(path(rel));
            out.push_back({{"path", rel},
                           {"bytes", bytes.size()},
                           {"fnv1a", vol ? json(nullptr) : json(fnv1a_hex(bytes))},
                           {"volatile", vol}});
        }
        return out;
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, bool>> files_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

int run_command(const ScenarioConfig& cfg, Artifacts& art, std::ostream& out) {
    const Scenario sc = build_scenario(cfg);
    if (const auto* f = std::get_if<FullSpec>(&cfg.solver)) {
        FullSolverConfig fc;
        fc.epsilon = f->epsilon;
        fc.T = f->T;
        fc.cfl = f->cfl;
        fc.dt = f->dt;
        fc.update = f->update;
        fc.snapshot_interval = cfg.output.snapshot_interval;
        const FullRun run = run_full(sc.grid, sc.init, fc, sc.conductivity, sc.forcing);
        write_ledger_csv(run.ledger, art.path(cfg.output.ledger).string());
        art.add(cfg.output.ledger);
        if (cfg.output.snapshots) {
            fs::create_directories(art.path("snapshots"));
            for (std::size_t k = 0; k < run.trajectory.snapshots.size(); ++k) {
                char name[64];
                std::snprintf(name, sizeof name, "snapshots/%04zu", k);
                const Snapshot& s = run.trajectory.snapshots[k];
                write_field_csv(sc.grid, s.e, art.path(std::string(name) + "_e.csv").string());
                write_field_csv(sc.grid, s.h, art.path(std::string(name) + "_h.csv").string());
                art.add(std::string(name) + "_e.csv");
                art.add(std::string(name) + "_h.csv");
            }
        }
        double dissipated = 0.0;
        for (std::size_t n = 1; n < run.ledger.size(); ++n) dissipated += run.time.dt * run.ledger[n].dissipation;
        const EnergyRecord& last = run.ledger.back();
        out << "run ok: solver=full eps=" << fmt(f->epsilon) << " steps=" << run.time.steps << " dt=" << fmt(run.time.dt)
            << " t=" << fmt(last.t) << " electric=" << fmt(last.electric) << " magnetic=" << fmt(last.magnetic)
            << " dissipated=" << fmt(dissipated) << '\n';
        return exit_code::ok;
    }

    QsSolverConfig qc = sc.qs_config();
    const QsRun run = run_qs(sc.grid, sc.init.h, qc, sc.conductivity, sc.forcing);
    write_ledger_csv(run.ledger, art.path(cfg.output.ledger).string());
    art.add(cfg.output.ledger);
    if (interface_level(sc.conductivity)) {
        write_interface_csv(run.interface, art.path(cfg.output.interface).string());
        art.add(cfg.output.interface);
    }
    if (cfg.output.snapshots) {
        fs::create_directories(art.path("snapshots"));
        for (std::size_t k = 0; k < run.trajectory.snapshots.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshots/%04zu", k);
            const Snapshot& s = run.trajectory.snapshots[k];
            write_field_csv(sc.grid, s.e, art.path(std::string(name) + "_e.csv").string());
            write_field_csv(sc.grid, s.h, art.path(std::string(name) + "_h.csv").string());
            art.add(std::string(name) + "_e.csv");
            art.add(std::string(name) + "_h.csv");
        }
    }
    const EnergyRecord& last = run.ledger.back();
    out << "run ok: solver=qs steps=" << run.steps << " min_dt=" << fmt(run.min_dt) << " t=" << fmt(last.t)
        << " magnetic=" << fmt(last.magnetic) << " dissipation_rate=" << fmt(last.dissipation) << '\n';
    return exit_code::ok;
}

int sweep_command(const ScenarioConfig& cfg, const ExecOptions& opt, Artifacts& art, std::ostream& out) {
    if (!cfg.sweep) throw ConfigError("sweep: the configuration has no sweep block (eps_list required)");
    const Scenario sc = build_scenario(cfg);
    const SweepReport report = run_sweep(sc, cfg.sweep->eps_list, opt.threads);
    art.write(cfg.output.sweep_json, sweep_report_json(report, false));
    art.write(cfg.output.sweep_csv, sweep_report_csv(report, false));
    json timing = {{"qs_wall_time_s", report.qs_wall_time}, {"rows", json::array()}};
    for (const SweepRow& r : report.rows) timing["rows"].push_back({{"epsilon", r.epsilon}, {"wall_time_s", r.wall_time}});
    art.write("timing.json", timing.dump(2) + "\n", true);

    if (report.failure) {
        out << "sweep incomplete: rows=" << report.rows.size() << "/" << cfg.sweep->eps_list.size() << '\n';
        const std::string& kind = report.failure->kind;
        const std::string msg = "member run failed (" + kind + "): " + report.failure->message;
        if (kind == "config") throw ConfigError(msg);
        if (kind == "degeneracy") throw DegeneracyError(msg);
        if (kind == "solver") throw SolverError(msg);
        if (kind == "structural") throw StructuralError(msg);
        throw Error(msg);
    }
    out << "sweep " << (report.confirming ? "confirming" : "not confirming") << ": rows=" << report.rows.size()
        << " h_gap[first]=" << fmt(report.rows.front().h_gap) << " h_gap[last]=" << fmt(report.rows.back().h_gap)
        << " slope=" << (report.slope ? fmt(*report.slope) : std::string("undefined")) << '\n';
    if (opt.strict && !report.confirming) return exit_code::not_confirming;
    return exit_code::ok;
}

int mms_command(const ScenarioConfig& cfg, Artifacts& art, std::ostream& out) {
    const auto* c = std::get_if<Constant>(&cfg.graph.shape());
    if (!c || cfg.material) throw ConfigError("mms: requires a uniform constant conductivity graph");
    MmsConfig mc = cfg.mms ? cfg.mms->study : MmsConfig{};
    mc.sigma0 = c->sigma;
    const MmsReport report = mms_study(mc);
    art.write(cfg.output.mms_json, mms_report_json(report));
    art.write(cfg.output.mms_csv, mms_report_csv(report));
    auto order = [](const MmsSeries& s) { return s.min_order ? fmt(*s.min_order) : std::string("undefined"); };
    out << "mms ok: full spatial order=" << order(report.full_spatial)
        << " qs temporal order=" << order(report.qs_temporal) << '\n';
    return exit_code::ok;
}

json growth_json(const ConductivityGraph& g, const GrowthReport& r) {
    return {{"graph", describe(g)},
            {"pass", r.pass()},
            {"lower_pass", r.lower_pass},
            {"upper_pass", r.upper_pass},
            {"monotone_pass", r.monotone_pass},
            {"worst_lower_margin", r.worst_lower_margin},
            {"worst_upper_ratio", r.worst_upper_ratio},
            {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)},
            {"admits_inverse", admits_inverse(g)}};
}

int validate_graph_command(const ScenarioConfig& cfg, Artifacts& art, std::ostream& out) {
    if (!cfg.growth) throw ConfigError("validate-graph: the configuration has no growth block");
    std::vector<ConductivityGraph> graphs{cfg.graph};
    if (cfg.material) graphs.push_back(cfg.material->graph);
    json doc = {{"params",
                 {{"p", cfg.growth->p},
                  {"a0", cfg.growth->a0},
                  {"a1", cfg.growth->a1},
                  {"b0", cfg.growth->b0},
                  {"m0", cfg.growth->m0},
                  {"s_max", cfg.growth->s_max},
                  {"samples", cfg.growth->n_samples}}},
                {"graphs", json::array()}};
    bool pass = true;
    for (const ConductivityGraph& g : graphs) {
        const GrowthReport r = validate_growth(g, *cfg.growth);
        pass = pass && r.pass();
        doc["graphs"].push_back(growth_json(g, r));
        out << "validate-graph " << (r.pass() ? "pass" : "FAIL") << ": " << describe(g)
            << " lower=" << (r.lower_pass ? "ok" : "fail") << " upper=" << (r.upper_pass ? "ok" : "fail")
            << " monotone=" << (r.monotone_pass ? "ok" : "fail") << '\n';
    }
    doc["pass"] = pass;
    art.write(cfg.output.growth_json, doc.dump(2) + "\n");
    return pass ? exit_code::ok : exit_code::config;
}

}  // namespace

int execute(const ScenarioConfig& config, Command command, const ExecOptions& options, std::ostream& out,
            std::ostream& err) {
    ScenarioConfig cfg = config;
    if (options.seed) cfg.seed = *options.seed;

    const fs::path dir(options.out_dir);
    Artifacts art(dir);
    int code = exit_code::ok;
    bool partial = false;
    std::string error;
    const std::string resolved = serialize(cfg);
    try {
        fs::create_directories(dir);
        art.write("config.resolved.json", resolved);
        switch (command) {
            case Command::run: code = run_command(cfg, art, out); break;
            case Command::sweep: code = sweep_command(cfg, options, art, out); break;
            case Command::mms: code = mms_command(cfg, art, out); break;
            case Command::validate_graph: code = validate_graph_command(cfg, art, out); break;
        }
    } catch (const ConfigError& e) {
        code = exit_code::config;
        error = e.what();
    } catch (const ParameterError& e) {
        code = exit_code::config;
        error = e.what();
    } catch (const UnsupportedShapeError& e) {
        code = exit_code::config;
        error = e.what();
    } catch (const SolverError& e) {
        code = exit_code::solver;
        error = e.what();
    } catch (const StructuralError& e) {
        code = exit_code::solver;
        error = e.what();
    } catch (const std::exception& e) {
        code = exit_code::failure;
        error = e.what();
    }
    if (!error.empty()) {
        partial = true;
        err << to_string(command) << " failed: " << error << '\n';
    }

    try {
        json manifest = {{"command", to_string(command)},
                         {"exit_code", code},
                         {"partial", partial},
                         {"error", error.empty() ? json(nullptr) : json(error)},
                         {"seed", cfg.seed},
                         {"config_hash", fnv1a_hex(options.config_text)},
                         {"resolved_config_hash", fnv1a_hex(resolved)},
                         {"outputs", art.listing()}};
        std::ofstream os(dir / "manifest.json", std::ios::binary);
        os << manifest.dump(2) << '\n';
        if (!os) throw Error("cannot write manifest");
    } catch (const std::exception& e) {
        err << "manifest: " << e.what() << '\n';
        if (code == exit_code::ok) code = exit_code::failure;
    }
    return code;
}

}  // namespace nlmaxwell
