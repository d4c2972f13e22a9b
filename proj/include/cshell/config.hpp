#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cshell/assemble.hpp"

namespace cshell {

// Minimal TOML reader/writer: [tables], key = value, with numbers, booleans,
// double-quoted strings and flat arrays of numbers or strings. '#' comments.
using TomlValue = std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;
using TomlTable = std::map<std::string, TomlValue>;
using TomlDoc = std::map<std::string, TomlTable>;

TomlDoc parse_toml(const std::string& text);  // throws ConfigError
std::string serialize_toml(const TomlDoc& doc);

struct PatchConfig {
    std::string kind = "plate";
    double radius = 1.0;
    std::vector<double> domain = {0.0, 1.0, 0.0, 1.0};
    std::vector<double> coeffs = {0, 0, 0, 0, 0, 0};
    std::string file;
    bool operator==(const PatchConfig&) const = default;
};

struct MaterialConfig {
    double mu = 1.0, lambda = 1.0, mu_c = 1.0, Lc = 1.0, a1 = 1.0, a2 = 1.0, a3 = 1.0;
    std::optional<double> b3_override;
    bool operator==(const MaterialConfig&) const = default;
};

struct GridConfig {
    int n1 = 17, n2 = 17;
    int quadrature = 1;  // nodal trapezoid rule; kept for provenance
    int admissibility_samples = 33;
    bool operator==(const GridConfig&) const = default;
};

struct VecFieldConfig {
    std::vector<double> value = {0, 0, 0};
    std::vector<double> p1, p2;
    bool operator==(const VecFieldConfig&) const = default;
};

struct MatFieldConfig {
    std::vector<double> value = std::vector<double>(9, 0.0);
    std::vector<double> p1, p2;
    bool operator==(const MatFieldConfig&) const = default;
};

struct LoadsConfig {
    VecFieldConfig N0, M1;
    MatFieldConfig C0, C1;
    std::string couple_edges = "none";
    bool include_M1 = false;
    bool operator==(const LoadsConfig&) const = default;
};

struct BoundaryConfig {
    std::string clamp = "none";
    std::string phi_d = "initial";   // preset for Dirichlet values
    std::string initial = "identity";  // identity | stretch | smooth | perturbed
    double amplitude = 0.05;
    int seed = 1;
    bool operator==(const BoundaryConfig&) const = default;
};

struct SolverConfig {
    int max_iter = 20000;
    double tol = 1e-8;
    std::string step_rule = "bb";
    double initial_step = 1.0;
    int checkpoint_every = 0;
    bool operator==(const SolverConfig&) const = default;
};

struct SweepConfig {
    std::vector<double> h = {0.2, 0.1, 0.05, 0.025};
    int n3 = 9;
    bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
    PatchConfig patch;
    MaterialConfig material;
    GridConfig grid;
    double h = 0.1;
    std::string prefactor = "h";  // "h" or "one"
    LoadsConfig loads;
    BoundaryConfig boundary;
    SolverConfig solver;
    SweepConfig sweep;
    std::string out_dir = "out";
    std::string golden;
    bool operator==(const RunConfig&) const = default;
};

RunConfig config_from_toml(const TomlDoc& doc);  // throws ConfigError
TomlDoc config_to_toml(const RunConfig& cfg);
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

MidsurfacePatch build_patch(const RunConfig& cfg, const std::string& base_dir = ".");
MaterialParams build_material(const RunConfig& cfg);
LoadSpec build_loads(const RunConfig& cfg);
ShellModel build_model(const RunConfig& cfg, const std::string& base_dir = ".");
ShellState preset_state(const std::string& name, const ShellModel& model, double amplitude, int seed);
// Initial state with Dirichlet values taken from the phi_d preset.
ShellState initial_state(const RunConfig& cfg, const ShellModel& model);

}  // namespace cshell
