#include <cmath>
#include <sstream>

#include "cshell/assemble.hpp"
#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/reconstruct.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

ShellModel ShellModel::make(const MidsurfacePatch& patch, const ShellGrid& grid,
                            const MaterialParams& mat, double h, const LoadSpec& loads,
                            bool prefactor_h) {
    mat.validate();
    if (!(h > 0.0)) throw ConfigError("thickness h must be positive");
    ShellModel m;
    m.patch = patch;
    m.grid = grid;
    m.mat = mat;
    m.loads = loads;
    m.h = h;
    m.prefactor_h = prefactor_h;
    m.frames = frames_on_lattice(patch, grid.dom, grid.n1, grid.n2);
    m.y0.resize(grid.size());
    for (int j = 0; j < grid.n2; ++j)
        for (int i = 0; i < grid.n1; ++i) m.y0[grid.node(i, j)] = patch.y0(grid.x1(i), grid.x2(j));

    // trapezoid line weights along the selected sides
    m.edge_weight.assign(grid.size(), 0.0);
    const std::string& e = loads.couple_edges;
    if (!e.empty() && e != "none") {
        std::stringstream ss(e == "all" ? std::string("left,right,bottom,top") : e);
        std::string side;
        while (std::getline(ss, side, ',')) {
            if (side == "left" || side == "right") {
                const int i = side == "left" ? 0 : grid.n1 - 1;
                for (int j = 0; j < grid.n2; ++j)
                    m.edge_weight[grid.node(i, j)] += trapezoid_weight(j, grid.n2, grid.d2());
            } else if (side == "bottom" || side == "top") {
                const int j = side == "bottom" ? 0 : grid.n2 - 1;
                for (int i = 0; i < grid.n1; ++i)
                    m.edge_weight[grid.node(i, j)] += trapezoid_weight(i, grid.n1, grid.d1());
            } else {
                throw ConfigError("unknown couple edge '" + side + "'");
            }
        }
    }
    return m;
}

namespace {

// Load potential carried by one node.
double node_load(const ShellState& s, const ShellModel& model, int i, int j) {
    const ShellGrid& g = model.grid;
    const LoadSpec& L = model.loads;
    const size_t p = g.node(i, j);
    const double x1 = g.x1(i), x2 = g.x2(j), h = model.h;
    double v = 0.0;
    if (!L.N0.is_zero()) v += h * g.weight[p] * L.N0.at(x1, x2).dot(s.m[p] - model.y0[p]);
    const bool need_m1 = L.include_M1 && !L.M1.is_zero();
    const bool on_edge = model.edge_weight[p] > 0.0;
    if (!need_m1 && !on_edge) return v;
    const SurfaceFrame& f = model.frames[p];
    const NodeKinematics nk = node_kinematics(s, g, model.frames, i, j);
    if (need_m1) {
        const Vec3 d = optimal_director(nk.E, s.Q[p], f, model.mat);
        v += h * h * g.weight[p] * L.M1.at(x1, x2).dot(d - f.n0);
    }
    if (on_edge) {
        const double we = model.edge_weight[p];
        if (!L.C0.is_zero()) v += h * we * (L.C0.at(x1, x2).cwiseProduct(s.Q[p])).sum();
        if (!L.C1.is_zero()) {
            const Skew3 A = optimal_rotation_rate(nk.k[0], nk.k[1], f, model.mat);
            v += h * h * we * (L.C1.at(x1, x2).cwiseProduct(s.Q[p] * A.matrix())).sum();
        }
    }
    return v;
}

}  // namespace

double load_potential(const ShellState& s, const ShellModel& model) {
    check_state(s, model.grid);
    return reduce_rows(model.grid.n2, [&](int j) {
        double r = 0.0;
        for (int i = 0; i < model.grid.n1; ++i) r += node_load(s, model, i, j);
        return r;
    });
}

EnergyBreakdown total_energy(const ShellState& s, const ShellModel& model) {
    EnergyBreakdown e;
    j0_integral(s, model.grid, model.frames, model.mat, &e.membrane, &e.curvature);
    e.membrane *= model.prefactor();
    e.curvature *= model.prefactor();
    e.load_potential = load_potential(s, model);
    e.total = e.membrane + e.curvature - e.load_potential;
    return e;
}

std::vector<double> energy_density_field(const ShellState& s, const ShellModel& model) {
    const ShellGrid& g = model.grid;
    check_state(s, g);
    std::vector<double> out(g.size());
    parallel_rows(g.n2, [&](int j) {
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const NodeKinematics nk = node_kinematics(s, g, model.frames, i, j);
            out[p] = density_J0(nk.E, nk.K, model.frames[p], model.mat);
        }
    });
    return out;
}

}  // namespace cshell
