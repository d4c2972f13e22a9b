#include "cshell/lattice.hpp"

#include <sstream>

#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

ShellGrid ShellGrid::make(const Domain& dom, int n1, int n2, const std::string& clamp) {
    if (n1 < 3 || n2 < 3) throw ConfigError("grid needs at least 3 nodes per direction");
    if (!(dom.x1max > dom.x1min) || !(dom.x2max > dom.x2min)) throw ConfigError("empty domain");
    ShellGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.dom = dom;
    g.weight.resize(g.size());
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i)
            g.weight[g.node(i, j)] = trapezoid_weight(i, n1, g.d1()) * trapezoid_weight(j, n2, g.d2());
    g.set_dirichlet(clamp);
    return g;
}

void ShellGrid::set_dirichlet(const std::string& clamp) {
    dirichlet.assign(size(), 0);
    if (clamp.empty() || clamp == "none") return;
    std::stringstream ss(clamp == "all" ? std::string("left,right,bottom,top") : clamp);
    std::string side;
    while (std::getline(ss, side, ',')) {
        if (side == "left")
            for (int j = 0; j < n2; ++j) dirichlet[node(0, j)] = 1;
        else if (side == "right")
            for (int j = 0; j < n2; ++j) dirichlet[node(n1 - 1, j)] = 1;
        else if (side == "bottom")
            for (int i = 0; i < n1; ++i) dirichlet[node(i, 0)] = 1;
        else if (side == "top")
            for (int i = 0; i < n1; ++i) dirichlet[node(i, n2 - 1)] = 1;
        else
            throw ConfigError("unknown boundary side '" + side + "'");
    }
}

ShellState identity_state(const ShellGrid& g, const MidsurfacePatch& patch) {
    ShellState s;
    s.n1 = g.n1;
    s.n2 = g.n2;
    s.m.resize(g.size());
    s.Q.assign(g.size(), Mat3::Identity());
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) s.m[g.node(i, j)] = patch.y0(g.x1(i), g.x2(j));
    return s;
}

void check_state(const ShellState& s, const ShellGrid& g) {
    if (s.n1 != g.n1 || s.n2 != g.n2 || s.m.size() != g.size() || s.Q.size() != g.size())
        throw StateIOError("state dimensions do not match the grid");
}

NodeKinematics node_kinematics(const ShellState& s, const ShellGrid& g,
                               const std::vector<SurfaceFrame>& frames, int i, int j) {
    NodeKinematics nk;
    const Stencil3 a = g.s1(i), b = g.s2(j);
    nk.dm.setZero();
    nk.dQ[0].setZero();
    nk.dQ[1].setZero();
    for (int t = 0; t < 3; ++t) {
        const size_t pa = g.node(a.idx[t], j), pb = g.node(i, b.idx[t]);
        nk.dm.col(0) += a.w[t] * s.m[pa];
        nk.dm.col(1) += b.w[t] * s.m[pb];
        nk.dQ[0] += a.w[t] * s.Q[pa];
        nk.dQ[1] += b.w[t] * s.Q[pb];
    }
    const size_t p = g.node(i, j);
    const SurfaceFrame& f = frames[p];
    const Mat3& Q = s.Q[p];
    nk.k[0] = rotation_rate(Q, nk.dQ[0], g.d1());
    nk.k[1] = rotation_rate(Q, nk.dQ[1], g.d2());
    nk.E = strain_E(nk.dm, Q, f);
    nk.K = bendcurv_K_from_rates(nk.k[0], nk.k[1], f);
    return nk;
}

double j0_integral(const ShellState& s, const ShellGrid& g, const std::vector<SurfaceFrame>& frames,
                   const MaterialParams& mat, double* membrane, double* curvature) {
    check_state(s, g);
    std::vector<double> mem(g.n2), cur(g.n2);
    parallel_rows(g.n2, [&](int j) {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const NodeKinematics nk = node_kinematics(s, g, frames, i, j);
            const double w = g.weight[p] * frames[p].det0;
            a += w * w_mp_hom(nk.E, frames[p], mat);
            b += w * w_curv_hom(nk.K, frames[p], mat);
        }
        mem[j] = a;
        cur[j] = b;
    });
    double a = 0.0, b = 0.0;
    for (int j = 0; j < g.n2; ++j) {
        a += mem[j];
        b += cur[j];
    }
    if (membrane) *membrane = a;
    if (curvature) *curvature = b;
    return a + b;
}

}  // namespace cshell
