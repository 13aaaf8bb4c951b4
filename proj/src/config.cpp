#include "nlmaxwell/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

using json = nlohmann::ordered_json;

namespace {

using Errors = std::vector<std::string>;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads one JSON object, recording type errors and unknown keys.
class Reader {
public:
    Reader(const json& j, std::string path, Errors& errors, std::set<std::string> allowed)
        : j_(j), path_(std::move(path)), errors_(errors) {
        ok_ = j.is_object();
        if (!ok_) {
            fail("expected an object");
            return;
        }
        for (const auto& [key, value] : j.items())
            if (!allowed.count(key)) errors_.push_back(join(path_, key) + ": unknown key");
    }

    bool ok() const { return ok_; }
    bool has(const std::string& key) const { return ok_ && j_.contains(key); }
    const json& at(const std::string& key) const { return j_.at(key); }
    std::string path(const std::string& key) const { return join(path_, key); }
    void fail(const std::string& msg) { errors_.push_back((path_.empty() ? "config" : path_) + ": " + msg); }
    void fail(const std::string& key, const std::string& msg) { errors_.push_back(path(key) + ": " + msg); }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        if (!at(key).is_number()) return fail(key, "expected a number");
        out = at(key).get<double>();
    }
    void count(const std::string& key, std::size_t& out) {
        if (!has(key)) return;
        if (!at(key).is_number_integer() || at(key).get<long long>() < 0)
            return fail(key, "expected a non-negative integer");
        out = at(key).get<std::size_t>();
    }
    void integer(const std::string& key, int& out) {
        if (!has(key)) return;
        if (!at(key).is_number_integer()) return fail(key, "expected an integer");
        out = at(key).get<int>();
    }
    void seed(const std::string& key, std::uint64_t& out) {
        if (!has(key)) return;
        if (!at(key).is_number_unsigned()) return fail(key, "expected a non-negative integer");
        out = at(key).get<std::uint64_t>();
    }
    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        if (!at(key).is_boolean()) return fail(key, "expected true or false");
        out = at(key).get<bool>();
    }
    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        if (!at(key).is_string()) return fail(key, "expected a string");
        out = at(key).get<std::string>();
    }
    /// Numeric array of length between lo and hi.
    bool numbers(const std::string& key, std::vector<double>& out, std::size_t lo, std::size_t hi) {
        if (!has(key)) return false;
        const json& a = at(key);
        if (!a.is_array() || a.size() < lo || a.size() > hi) {
            fail(key, "expected an array of " + std::to_string(lo) + (lo == hi ? "" : " to " + std::to_string(hi)) +
                          " numbers");
            return false;
        }
        out.clear();
        for (const json& v : a) {
            if (!v.is_number()) {
                fail(key, "expected numbers");
                return false;
            }
            out.push_back(v.get<double>());
        }
        return true;
    }
private:
    const json& j_;
    std::string path_;
    Errors& errors_;
    bool ok_ = false;
};

void require(bool cond, Errors& errors, const std::string& path, const std::string& msg) {
    if (!cond) errors.push_back(path + ": " + msg);
}

std::optional<ConductivityGraph> parse_graph(const json& j, const std::string& path, Errors& errors) {
    if (!j.is_object()) {
        errors.push_back(path + ": expected an object");
        return std::nullopt;
    }
    const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    const std::size_t before = errors.size();
    try {
        if (kind == "constant") {
            Reader r(j, path, errors, {"kind", "sigma"});
            double sigma = 1.0;
            r.number("sigma", sigma);
            if (errors.size() == before) return ConductivityGraph::constant(sigma);
        } else if (kind == "power_law") {
            Reader r(j, path, errors, {"kind", "p"});
            double p = 0.0;
            if (!r.has("p")) r.fail("p", "required");
            r.number("p", p);
            if (errors.size() == before) return ConductivityGraph::power_law(p);
        } else if (kind == "step") {
            Reader r(j, path, errors, {"kind", "a", "b", "threshold"});
            double a = 1.0, b = 2.0, t = 1.0;
            r.number("a", a);
            r.number("b", b);
            r.number("threshold", t);
            if (errors.size() == before) return ConductivityGraph::step(a, b, t);
        } else if (kind == "piecewise_linear") {
            Reader r(j, path, errors, {"kind", "knots"});
            std::vector<std::pair<double, double>> knots;
            if (!r.has("knots") || !r.at("knots").is_array()) {
                r.fail("knots", "expected an array of [s, sigma] pairs");
            } else {
                for (const json& k : r.at("knots")) {
                    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
                        r.fail("knots", "expected an array of [s, sigma] pairs");
                        break;
                    }
                    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
                }
            }
            if (errors.size() == before) return ConductivityGraph::piecewise_linear(std::move(knots));
        } else if (kind == "smoothed") {
            Reader r(j, path, errors, {"kind", "base", "m"});
            double m = 1.0;
            if (!r.has("m")) r.fail("m", "required");
            r.number("m", m);
            std::optional<ConductivityGraph> base;
            if (!r.has("base"))
                r.fail("base", "required");
            else
                base = parse_graph(r.at("base"), r.path("base"), errors);
            if (errors.size() == before && base) return smooth(*base, m);
        } else {
            errors.push_back(join(path, "kind") +
                             ": expected one of constant, power_law, step, piecewise_linear, smoothed");
        }
    } catch (const Error& e) {
        errors.push_back(path + ": " + e.what());
    }
    return std::nullopt;
}

json graph_json(const ConductivityGraph& g) {
    struct V {
        json operator()(const PowerLaw& s) const { return {{"kind", "power_law"}, {"p", s.p}}; }
        json operator()(const Step& s) const {
            return {{"kind", "step"}, {"a", s.a}, {"b", s.b}, {"threshold", s.threshold}};
        }
        json operator()(const PiecewiseLinear& s) const {
            json knots = json::array();
            for (const auto& [x, y] : s.knots) knots.push_back({x, y});
            return {{"kind", "piecewise_linear"}, {"knots", knots}};
        }
        json operator()(const Smoothed& s) const {
            return {{"kind", "smoothed"}, {"base", graph_json(*s.base)}, {"m", s.m}};
        }
        json operator()(const Constant& s) const { return {{"kind", "constant"}, {"sigma", s.sigma}}; }
    };
    return std::visit(V{}, g.shape());
}

template <typename T, std::size_t N>
void fill(std::array<T, N>& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size() && i < N; ++i) out[i] = static_cast<T>(v[i]);
}

FieldPreset parse_preset(const json& j, const std::string& path, Errors& errors) {
    FieldPreset p;
    if (!j.is_object()) {
        errors.push_back(path + ": expected an object");
        return p;
    }
    const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    std::vector<double> v;
    if (kind == "zero") {
        Reader r(j, path, errors, {"kind"});
    } else if (kind == "solenoidal_mode") {
        Reader r(j, path, errors, {"kind", "wavenumbers", "amplitude"});
        p.kind = FieldPreset::Kind::solenoidal_mode;
        if (r.numbers("wavenumbers", v, 1, 3)) {
            for (double k : v)
                if (k != std::floor(k) || k < 1) r.fail("wavenumbers", "expected positive integers");
            fill(p.mode.wavenumbers, v);
        }
        r.number("amplitude", p.mode.amplitude);
    } else if (kind == "gaussian_bump") {
        Reader r(j, path, errors, {"kind", "center", "width", "amplitude"});
        p.kind = FieldPreset::Kind::gaussian_bump;
        if (r.numbers("center", v, 1, 3)) fill(p.bump.center, v);
        r.number("width", p.bump.width);
        r.number("amplitude", p.bump.amplitude);
        require(p.bump.width > 0.0, errors, join(path, "width"), "gaussian_bump width must be > 0");
    } else {
        errors.push_back(join(path, "kind") + ": expected one of zero, solenoidal_mode, gaussian_bump");
    }
    return p;
}

json preset_json(const FieldPreset& p) {
    switch (p.kind) {
        case FieldPreset::Kind::zero: return {{"kind", "zero"}};
        case FieldPreset::Kind::solenoidal_mode:
            return {{"kind", "solenoidal_mode"}, {"wavenumbers", p.mode.wavenumbers}, {"amplitude", p.mode.amplitude}};
        case FieldPreset::Kind::gaussian_bump:
            return {{"kind", "gaussian_bump"},
                    {"center", p.bump.center},
                    {"width", p.bump.width},
                    {"amplitude", p.bump.amplitude}};
    }
    return {};
}

void parse_grid(const json& j, GridSpec& g, Errors& errors) {
    Reader r(j, "grid", errors, {"dim", "cells", "extent"});
    if (!r.ok()) return;
    r.integer("dim", g.dim);
    if (g.dim != 2 && g.dim != 3) {
        r.fail("dim", "must be 2 or 3");
        return;
    }
    const auto n = static_cast<std::size_t>(g.dim);
    std::vector<double> v;
    if (r.numbers("cells", v, n, n)) {
        for (std::size_t a = 0; a < n; ++a) {
            if (v[a] != std::floor(v[a]) || v[a] < 2) r.fail("cells", "cell counts must be integers >= 2");
            g.cells[a] = static_cast<std::size_t>(std::max(v[a], 0.0));
        }
    }
    if (r.has("extent")) {
        const json& e = r.at("extent");
        if (!e.is_array() || e.size() != n) {
            r.fail("extent", "expected one [lower, upper] pair per axis");
        } else {
            for (std::size_t a = 0; a < n; ++a) {
                if (!e[a].is_array() || e[a].size() != 2 || !e[a][0].is_number() || !e[a][1].is_number()) {
                    r.fail("extent", "expected one [lower, upper] pair per axis");
                    break;
                }
                g.extent[a] = {e[a][0].get<double>(), e[a][1].get<double>()};
                if (!(g.extent[a].length() > 0.0) || !std::isfinite(g.extent[a].length()))
                    r.fail("extent", "extents must have positive length");
            }
        }
    }
}

void parse_full(const json& j, FullSpec& f, Errors& errors) {
    Reader r(j, "solver.full", errors, {"epsilon", "T", "cfl", "dt", "update"});
    if (!r.ok()) return;
    r.number("epsilon", f.epsilon);
    r.number("T", f.T);
    r.number("cfl", f.cfl);
    r.number("dt", f.dt);
    std::string update = "midpoint";
    r.string("update", update);
    if (update == "midpoint")
        f.update = ConductionUpdate::midpoint;
    else if (update == "backward_euler")
        f.update = ConductionUpdate::backward_euler;
    else
        r.fail("update", "expected midpoint or backward_euler");
    require(f.epsilon > 0.0 && std::isfinite(f.epsilon), errors, "solver.full.epsilon", "requires epsilon > 0");
    require(f.T > 0.0 && std::isfinite(f.T), errors, "solver.full.T", "requires T > 0");
    require(f.cfl > 0.0 && f.cfl <= 1.0, errors, "solver.full.cfl", "requires 0 < cfl <= 1");
    require(f.dt >= 0.0 && std::isfinite(f.dt), errors, "solver.full.dt", "requires dt >= 0 (0 = CFL limit)");
}

void parse_qs(const json& j, QsSpec& q, Errors& errors) {
    Reader r(j, "solver.qs", errors, {"T", "delta", "tau_gamma", "cd", "dt"});
    if (!r.ok()) return;
    r.number("T", q.T);
    r.number("delta", q.delta);
    r.number("tau_gamma", q.tau_gamma);
    r.number("cd", q.cd);
    r.number("dt", q.dt);
    require(q.T > 0.0 && std::isfinite(q.T), errors, "solver.qs.T", "requires T > 0");
    require(q.delta > 0.0 && std::isfinite(q.delta), errors, "solver.qs.delta", "requires delta > 0");
    require(q.tau_gamma > 0.0, errors, "solver.qs.tau_gamma", "requires tau_gamma > 0");
    require(q.cd > 0.0 && q.cd <= 1.0, errors, "solver.qs.cd", "requires 0 < cd <= 1");
    require(q.dt >= 0.0 && std::isfinite(q.dt), errors, "solver.qs.dt", "requires dt >= 0 (0 = stability limit)");
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

StaggeredGrid GridSpec::build() const {
    if (dim == 2) return StaggeredGrid::make_2d(cells[0], cells[1], extent[0], extent[1]);
    return StaggeredGrid::make_3d(cells[0], cells[1], cells[2], extent[0], extent[1], extent[2]);
}

double ScenarioConfig::final_time() const {
    return std::visit([](const auto& s) { return s.T; }, solver);
}

ConfigParseResult parse_config(std::string_view text) {
    ConfigParseResult result;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, col] = line_column(text, byte);
        std::string detail = e.what();
        if (const auto pos = detail.find(": ", detail.find("parse error")); pos != std::string::npos)
            detail = detail.substr(pos + 2);
        result.errors.push_back("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                                ": " + detail);
        return result;
    }

    Errors& errors = result.errors;
    ScenarioConfig cfg;

    Reader top(doc, "", errors,
               {"name", "seed", "grid", "graph", "material", "initial", "forcing", "solver", "output", "sweep",
                "growth", "mms"});
    if (!top.ok()) return result;
    top.string("name", cfg.name);
    top.seed("seed", cfg.seed);

    if (top.has("grid")) parse_grid(doc["grid"], cfg.grid, errors);

    if (!top.has("graph")) {
        top.fail("graph", "required");
    } else if (auto g = parse_graph(doc["graph"], "graph", errors)) {
        cfg.graph = *g;
    }

    if (top.has("material")) {
        Reader r(doc["material"], "material", errors, {"graph", "region"});
        if (r.ok()) {
            MaterialSpec m;
            if (!r.has("graph"))
                r.fail("graph", "required");
            else if (auto g = parse_graph(r.at("graph"), "material.graph", errors))
                m.graph = *g;
            if (!r.has("region")) {
                r.fail("region", "required");
            } else {
                const json& reg = r.at("region");
                const std::string kind =
                    reg.is_object() && reg.contains("kind") && reg["kind"].is_string() ? reg["kind"].get<std::string>()
                                                                                       : "";
                std::vector<double> v;
                if (kind == "half_space") {
                    Reader rr(reg, "material.region", errors, {"kind", "axis", "position"});
                    m.region.kind = MaterialPreset::Kind::half_space;
                    rr.integer("axis", m.region.axis);
                    rr.number("position", m.region.position);
                    if (m.region.axis < 0 || m.region.axis >= cfg.grid.dim) rr.fail("axis", "out of range for grid");
                } else if (kind == "ball") {
                    Reader rr(reg, "material.region", errors, {"kind", "center", "radius"});
                    m.region.kind = MaterialPreset::Kind::ball;
                    if (rr.numbers("center", v, 1, 3)) fill(m.region.center, v);
                    rr.number("radius", m.region.radius);
                    if (!(m.region.radius > 0.0)) rr.fail("radius", "must be > 0");
                } else {
                    errors.push_back("material.region.kind: expected half_space or ball");
                }
            }
            cfg.material = m;
        }
    }

    if (top.has("initial")) {
        Reader r(doc["initial"], "initial", errors, {"electric", "magnetic"});
        if (r.has("electric")) cfg.initial_electric = parse_preset(r.at("electric"), "initial.electric", errors);
        if (r.has("magnetic")) cfg.initial_magnetic = parse_preset(r.at("magnetic"), "initial.magnetic", errors);
    }

    if (top.has("forcing")) {
        const json& f = doc["forcing"];
        const std::string kind =
            f.is_object() && f.contains("kind") && f["kind"].is_string() ? f["kind"].get<std::string>() : "";
        if (kind == "zero") {
            Reader r(f, "forcing", errors, {"kind"});
        } else if (kind == "ramped_profile") {
            Reader r(f, "forcing", errors, {"kind", "profile", "ramp_time"});
            cfg.forcing.kind = ForcingSpec::Kind::ramped_profile;
            if (!r.has("profile"))
                r.fail("profile", "required");
            else
                cfg.forcing.profile = parse_preset(r.at("profile"), "forcing.profile", errors);
            r.number("ramp_time", cfg.forcing.ramp_time);
            if (!(cfg.forcing.ramp_time >= 0.0)) r.fail("ramp_time", "must be >= 0");
        } else {
            errors.push_back("forcing.kind: expected zero or ramped_profile");
        }
    }

    if (!top.has("solver")) {
        top.fail("solver", "required");
    } else {
        const json& s = doc["solver"];
        Reader r(s, "solver", errors, {"full", "qs"});
        if (r.ok()) {
            const int blocks = static_cast<int>(r.has("full")) + static_cast<int>(r.has("qs"));
            if (blocks != 1) {
                r.fail("exactly one solver block (full or qs) is required");
            } else if (r.has("full")) {
                FullSpec f;
                parse_full(r.at("full"), f, errors);
                cfg.solver = f;
            } else {
                QsSpec q;
                parse_qs(r.at("qs"), q, errors);
                cfg.solver = q;
            }
        }
    }

    if (top.has("output")) {
        Reader r(doc["output"], "output", errors,
                 {"snapshot_interval", "snapshots", "ledger", "interface", "sweep_json", "sweep_csv", "mms_json",
                  "mms_csv", "growth_json"});
        OutputSpec& o = cfg.output;
        r.number("snapshot_interval", o.snapshot_interval);
        r.boolean("snapshots", o.snapshots);
        r.string("ledger", o.ledger);
        r.string("interface", o.interface);
        r.string("sweep_json", o.sweep_json);
        r.string("sweep_csv", o.sweep_csv);
        r.string("mms_json", o.mms_json);
        r.string("mms_csv", o.mms_csv);
        r.string("growth_json", o.growth_json);
        if (!(o.snapshot_interval >= 0.0)) r.fail("snapshot_interval", "must be >= 0");
        const std::pair<const char*, const std::string*> paths[] = {
            {"ledger", &o.ledger},       {"interface", &o.interface}, {"sweep_json", &o.sweep_json},
            {"sweep_csv", &o.sweep_csv}, {"mms_json", &o.mms_json},   {"mms_csv", &o.mms_csv},
            {"growth_json", &o.growth_json}};
        for (const auto& [key, p] : paths)
            if (p->empty() || p->find("..") != std::string::npos || p->front() == '/')
                r.fail(key, "must be a non-empty path relative to the output directory");
    }

    if (top.has("sweep")) {
        Reader r(doc["sweep"], "sweep", errors, {"eps_list", "cfl", "well_prepared"});
        SweepSpec s;
        std::vector<double> v;
        if (!r.has("eps_list")) r.fail("eps_list", "required");
        if (r.numbers("eps_list", v, 1, 64)) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (!(v[k] > 0.0)) r.fail("eps_list", "every eps must be > 0");
                if (k > 0 && !(v[k] < v[k - 1])) r.fail("eps_list", "must be strictly decreasing");
            }
            s.eps_list = v;
        }
        r.number("cfl", s.cfl);
        r.boolean("well_prepared", s.well_prepared);
        if (!(s.cfl > 0.0 && s.cfl <= 1.0)) r.fail("cfl", "requires 0 < cfl <= 1");
        cfg.sweep = s;
    }

    if (top.has("growth")) {
        Reader r(doc["growth"], "growth", errors, {"p", "a0", "a1", "b0", "m0", "s_max", "samples"});
        GrowthParams g;
        for (const char* key : {"p", "a0", "b0"})
            if (!r.has(key)) r.fail(key, "required");
        r.number("p", g.p);
        r.number("a0", g.a0);
        r.number("a1", g.a1);
        r.number("b0", g.b0);
        r.number("m0", g.m0);
        r.number("s_max", g.s_max);
        r.count("samples", g.n_samples);
        if (!(g.p >= 0.0)) r.fail("p", "must be >= 0");
        if (!(g.a0 > 0.0)) r.fail("a0", "must be > 0");
        if (!(g.a1 >= 0.0)) r.fail("a1", "must be >= 0");
        if (!(g.b0 > 0.0)) r.fail("b0", "must be > 0");
        if (!(g.m0 >= 0.0)) r.fail("m0", "must be >= 0");
        if (!(g.s_max > 0.0)) r.fail("s_max", "must be > 0");
        if (g.n_samples < 2) r.fail("samples", "must be >= 2");
        cfg.growth = g;
    }

    if (top.has("mms")) {
        Reader r(doc["mms"], "mms", errors,
                 {"epsilon", "amplitude", "n_coarse", "levels", "full_T", "full_cfl", "qs_cells", "qs_T", "qs_dt0",
                  "qs_omega", "delta_study", "deltas", "delta_reference"});
        MmsConfig& m = cfg.mms.emplace().study;
        r.number("epsilon", m.epsilon);
        r.number("amplitude", m.amplitude);
        r.count("n_coarse", m.n_coarse);
        r.count("levels", m.levels);
        r.number("full_T", m.full_T);
        r.number("full_cfl", m.full_cfl);
        r.count("qs_cells", m.qs_cells);
        r.number("qs_T", m.qs_T);
        r.number("qs_dt0", m.qs_dt0);
        r.number("qs_omega", m.qs_omega);
        r.boolean("delta_study", m.delta_study);
        std::vector<double> v;
        if (r.numbers("deltas", v, 1, 16)) m.deltas = v;
        r.number("delta_reference", m.delta_reference);
        if (!(m.epsilon > 0.0)) r.fail("epsilon", "requires epsilon > 0");
        if (m.levels < 2) r.fail("levels", "must be >= 2");
        if (m.n_coarse < 2 || m.qs_cells < 2) r.fail("grids need at least 2 cells");
        if (!(m.full_T > 0.0) || !(m.qs_T > 0.0)) r.fail("final times must be > 0");
        if (!(m.full_cfl > 0.0 && m.full_cfl <= 1.0)) r.fail("full_cfl", "requires 0 < full_cfl <= 1");
        if (!(m.qs_dt0 > 0.0)) r.fail("qs_dt0", "must be > 0");
        for (double d : m.deltas)
            if (!(d > 0.0)) r.fail("deltas", "must be > 0");
        if (!(m.delta_reference > 0.0)) r.fail("delta_reference", "must be > 0");
    }

    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

ScenarioConfig parse_config_or_throw(std::string_view text) {
    ConfigParseResult r = parse_config(text);
    if (!r.config) {
        std::string msg;
        for (const std::string& e : r.errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    return std::move(*r.config);
}

std::string serialize(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    const auto n = static_cast<std::size_t>(cfg.grid.dim);
    json cells = json::array(), extent = json::array();
    for (std::size_t a = 0; a < n; ++a) {
        cells.push_back(cfg.grid.cells[a]);
        extent.push_back({cfg.grid.extent[a].lower, cfg.grid.extent[a].upper});
    }
    j["grid"] = {{"dim", cfg.grid.dim}, {"cells", cells}, {"extent", extent}};
    j["graph"] = graph_json(cfg.graph);
    if (cfg.material) {
        json region;
        const MaterialPreset& m = cfg.material->region;
        if (m.kind == MaterialPreset::Kind::half_space)
            region = {{"kind", "half_space"}, {"axis", m.axis}, {"position", m.position}};
        else
            region = {{"kind", "ball"}, {"center", m.center}, {"radius", m.radius}};
        j["material"] = {{"graph", graph_json(cfg.material->graph)}, {"region", region}};
    }
    j["initial"] = {{"electric", preset_json(cfg.initial_electric)}, {"magnetic", preset_json(cfg.initial_magnetic)}};
    if (cfg.forcing.kind == ForcingSpec::Kind::zero)
        j["forcing"] = {{"kind", "zero"}};
    else
        j["forcing"] = {{"kind", "ramped_profile"},
                        {"profile", preset_json(cfg.forcing.profile)},
                        {"ramp_time", cfg.forcing.ramp_time}};
    if (const auto* f = std::get_if<FullSpec>(&cfg.solver))
        j["solver"] = {{"full",
                        {{"epsilon", f->epsilon},
                         {"T", f->T},
                         {"cfl", f->cfl},
                         {"dt", f->dt},
                         {"update", f->update == ConductionUpdate::midpoint ? "midpoint" : "backward_euler"}}}};
    else {
        const QsSpec& q = std::get<QsSpec>(cfg.solver);
        j["solver"] = {
            {"qs", {{"T", q.T}, {"delta", q.delta}, {"tau_gamma", q.tau_gamma}, {"cd", q.cd}, {"dt", q.dt}}}};
    }
    const OutputSpec& o = cfg.output;
    j["output"] = {{"snapshot_interval", o.snapshot_interval},
                   {"snapshots", o.snapshots},
                   {"ledger", o.ledger},
                   {"interface", o.interface},
                   {"sweep_json", o.sweep_json},
                   {"sweep_csv", o.sweep_csv},
                   {"mms_json", o.mms_json},
                   {"mms_csv", o.mms_csv},
                   {"growth_json", o.growth_json}};
    if (cfg.sweep)
        j["sweep"] = {{"eps_list", cfg.sweep->eps_list}, {"cfl", cfg.sweep->cfl}, {"well_prepared", cfg.sweep->well_prepared}};
    if (cfg.growth) {
        const GrowthParams& g = *cfg.growth;
        j["growth"] = {{"p", g.p},   {"a0", g.a0},       {"a1", g.a1},          {"b0", g.b0},
                       {"m0", g.m0}, {"s_max", g.s_max}, {"samples", g.n_samples}};
    }
    if (cfg.mms) {
        const MmsConfig& m = cfg.mms->study;
        j["mms"] = {{"epsilon", m.epsilon},   {"amplitude", m.amplitude},     {"n_coarse", m.n_coarse},
                    {"levels", m.levels},     {"full_T", m.full_T},           {"full_cfl", m.full_cfl},
                    {"qs_cells", m.qs_cells}, {"qs_T", m.qs_T},               {"qs_dt0", m.qs_dt0},
                    {"qs_omega", m.qs_omega}, {"delta_study", m.delta_study}, {"deltas", m.deltas},
                    {"delta_reference", m.delta_reference}};
    }
    return j.dump(2) + "\n";
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    Scenario sc;
    sc.name = cfg.name;
    sc.seed = cfg.seed;
    sc.grid = cfg.grid.build();
    if (cfg.material)
        sc.conductivity = ConductivityField(cfg.graph, cfg.material->graph, material_index(sc.grid, cfg.material->region));
    else
        sc.conductivity = ConductivityField(cfg.graph);
    sc.init = FieldState::zeros(sc.grid);
    sc.init.e = electric_preset(sc.grid, cfg.initial_electric);
    sc.init.h = magnetic_preset(sc.grid, cfg.initial_magnetic);
    if (cfg.forcing.kind == ForcingSpec::Kind::ramped_profile)
        sc.forcing = Forcing::ramped(electric_preset(sc.grid, cfg.forcing.profile), cfg.forcing.ramp_time);
    sc.T = cfg.final_time();
    sc.snapshot_interval = cfg.output.snapshot_interval;
    if (const auto* q = std::get_if<QsSpec>(&cfg.solver)) {
        sc.delta = q->delta;
        sc.tau_gamma = q->tau_gamma;
        sc.cd = q->cd;
        sc.qs_dt = q->dt;
    }
    if (cfg.sweep) {
        sc.cfl = cfg.sweep->cfl;
        sc.well_prepared = cfg.sweep->well_prepared;
    } else if (const auto* f = std::get_if<FullSpec>(&cfg.solver)) {
        sc.cfl = f->cfl;
    }
    std::ostringstream os;
    os << "E0=" << to_string(cfg.initial_electric.kind) << ",H0=curl(" << to_string(cfg.initial_magnetic.kind)
       << "),forcing=" << (cfg.forcing.kind == ForcingSpec::Kind::zero ? "zero" : "ramped_profile");
    if (cfg.material) os << ",material=" << to_string(cfg.material->region.kind);
    sc.data_description = os.str();
    return sc;
}

}  // namespace nlmaxwell
