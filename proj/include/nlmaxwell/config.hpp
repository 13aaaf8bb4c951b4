#pragma once

// JSON scenario configuration. The schema is documented in README.md.

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlmaxwell/conductivity.hpp"
#include "nlmaxwell/grid.hpp"
#include "nlmaxwell/limit_harness.hpp"
#include "nlmaxwell/presets.hpp"
#include "nlmaxwell/solver_full.hpp"

namespace nlmaxwell {

struct GridSpec {
    int dim = 2;
    std::array<std::size_t, 3> cells{32, 32, 32};
    std::array<Interval, 3> extent{Interval{0.0, std::numbers::pi}, Interval{0.0, std::numbers::pi},
                                   Interval{0.0, std::numbers::pi}};
    bool operator==(const GridSpec&) const = default;

    StaggeredGrid build() const;
};

struct MaterialSpec {
    ConductivityGraph graph = ConductivityGraph::constant(1.0);
    MaterialPreset region;
    bool operator==(const MaterialSpec&) const = default;
};

struct ForcingSpec {
    enum class Kind { zero, ramped_profile };
    Kind kind = Kind::zero;
    FieldPreset profile;
    double ramp_time = 0.0;
    bool operator==(const ForcingSpec&) const = default;
};

struct FullSpec {
    double epsilon = 1.0;
    double T = 1.0;
    double cfl = 0.9;
    double dt = 0.0;
    ConductionUpdate update = ConductionUpdate::midpoint;
    bool operator==(const FullSpec&) const = default;
};

struct QsSpec {
    double T = 1.0;
    double delta = kDefaultResistivityFloor;
    double tau_gamma = 1e-3;
    double cd = 0.5;
    double dt = 0.0;
    bool operator==(const QsSpec&) const = default;
};

struct OutputSpec {
    double snapshot_interval = 0.0;
    bool snapshots = false;
    std::string ledger = "ledger.csv";
    std::string interface = "interface.csv";
    std::string sweep_json = "sweep.json";
    std::string sweep_csv = "sweep.csv";
    std::string mms_json = "mms.json";
    std::string mms_csv = "mms.csv";
    std::string growth_json = "growth.json";
    bool operator==(const OutputSpec&) const = default;
};

struct SweepSpec {
    std::vector<double> eps_list;
    double cfl = 0.9;
    bool well_prepared = true;
    bool operator==(const SweepSpec&) const = default;
};

struct MmsSpec {
    MmsConfig study;
    bool operator==(const MmsSpec&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    GridSpec grid;
    ConductivityGraph graph = ConductivityGraph::constant(1.0);
    std::optional<MaterialSpec> material;
    FieldPreset initial_electric;
    FieldPreset initial_magnetic;
    ForcingSpec forcing;
    std::variant<FullSpec, QsSpec> solver;
    OutputSpec output;
    std::optional<SweepSpec> sweep;
    std::optional<GrowthParams> growth;
    std::optional<MmsSpec> mms;
    bool operator==(const ScenarioConfig&) const = default;

    double final_time() const;
};

struct ConfigParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;  // every problem found, in document order
};

/// Parses and validates a JSON document. Malformed JSON yields a single error
/// with line and column; otherwise all validation errors are collected.
ConfigParseResult parse_config(std::string_view text);

/// Same, but throws ConfigError with all messages joined by newlines.
ScenarioConfig parse_config_or_throw(std::string_view text);

/// Canonical JSON with every default written out.
std::string serialize(const ScenarioConfig& cfg);

/// Grid, conductivity field, initial data and forcing for the configuration.
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace nlmaxwell
