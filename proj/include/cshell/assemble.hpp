#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cshell/cosserat3d.hpp"
#include "cshell/lattice.hpp"
#include "cshell/surface.hpp"

namespace cshell {

// value * p1(x1) * p2(x2) with p1, p2 given by ascending coefficients.
// Empty coefficient lists stand for the constant polynomial 1.
template <class T>
struct SeparableField {
    T value = T::Zero();
    std::vector<double> p1, p2;
    T at(double x1, double x2) const { return value * poly(p1, x1) * poly(p2, x2); }
    bool is_zero() const { return value.isZero(0.0); }
    static double poly(const std::vector<double>& c, double x) {
        if (c.empty()) return 1.0;
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return s;
    }
};
using VecField = SeparableField<Vec3>;
using MatField = SeparableField<Mat3>;

struct LoadSpec {
    VecField N0;  // body-force resultant
    VecField M1;  // first moment of the body force
    MatField C0;  // boundary couple resultant on gamma_1
    MatField C1;  // first moment of the boundary couple
    std::string couple_edges = "none";
    bool include_M1 = false;
};

struct EnergyBreakdown {
    double membrane = 0.0;
    double curvature = 0.0;
    double load_potential = 0.0;
    double total = 0.0;
};

// Everything the reduced functional needs apart from the unknowns.
struct ShellModel {
    MidsurfacePatch patch = MidsurfacePatch::plate(Domain{});
    ShellGrid grid;
    MaterialParams mat;
    LoadSpec loads;
    double h = 0.1;
    bool prefactor_h = true;
    std::vector<SurfaceFrame> frames;
    std::vector<Vec3> y0;             // reference midsurface at the nodes
    std::vector<double> edge_weight;  // line weights of gamma_1 per node

    static ShellModel make(const MidsurfacePatch& patch, const ShellGrid& grid,
                           const MaterialParams& mat, double h, const LoadSpec& loads = {},
                           bool prefactor_h = true);
    double prefactor() const { return prefactor_h ? h : 1.0; }
};

EnergyBreakdown total_energy(const ShellState& s, const ShellModel& model);
double load_potential(const ShellState& s, const ShellModel& model);

// Per-node energy density (membrane + curvature) times det grad Theta(0), no prefactor.
std::vector<double> energy_density_field(const ShellState& s, const ShellModel& model);

struct Gradient {
    std::vector<Vec3> gm;  // zero on Dirichlet nodes
    std::vector<Vec3> gq;  // left-trivialized rotation gradient
    double inf_norm() const;
    double dot(const Gradient& o) const;
};
Gradient gradient(const ShellState& s, const ShellModel& model);

// Q <- Q exp(anti(t * dq)), m <- m + t * dm (Dirichlet nodes untouched).
ShellState retract(const ShellState& s, const ShellModel& model, const Gradient& dir, double t);

struct IterRecord {
    int iter;
    EnergyBreakdown energy;
    double grad_inf;
    double step;
};

struct MinimizeOptions {
    int max_iter = 20000;
    double tol = 1e-8;
    std::string step_rule = "bb";  // "bb" or "armijo"
    double initial_step = 1.0;
    double armijo_c = 1e-4;
    int reorth_every = 100;
    // Step memory is cleared every restart_every iterations, which is what
    // makes a run resumed from a checkpoint continue identically.
    int restart_every = 0;
    std::function<void(const ShellState&, int)> checkpoint;
};

struct MinimizeResult {
    ShellState state;
    std::vector<IterRecord> log;
    bool converged = false;
    int iterations = 0;
    double max_orth_defect = 0.0;
};

MinimizeResult minimize(const ShellState& s0, const ShellModel& model, const MinimizeOptions& opt);

void write_iteration_csv(std::ostream& os, const std::vector<IterRecord>& log);
void write_state(std::ostream& os, const ShellState& s);
void write_state_file(const std::string& path, const ShellState& s);  // throws OutputError
ShellState read_state(std::istream& is);                              // throws StateIOError
ShellState read_state_file(const std::string& path);

}  // namespace cshell
