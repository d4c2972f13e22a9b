#pragma once

#include <string>
#include <vector>

#include "cshell/cosserat3d.hpp"
#include "cshell/fd.hpp"
#include "cshell/surface.hpp"

namespace cshell {

// Node lattice over the rectangle omega. Node (i, j) has index j*n1 + i with
// i running along x1. Quadrature is the composite trapezoid rule on nodes.
struct ShellGrid {
    int n1 = 3, n2 = 3;
    Domain dom;
    std::vector<char> dirichlet;
    std::vector<double> weight;

    static ShellGrid make(const Domain& dom, int n1, int n2, const std::string& clamp = "none");
    // clamp is "none", "all", or a comma list of left,right,bottom,top
    void set_dirichlet(const std::string& clamp);

    size_t size() const { return static_cast<size_t>(n1) * n2; }
    size_t node(int i, int j) const { return static_cast<size_t>(j) * n1 + i; }
    double d1() const { return (dom.x1max - dom.x1min) / (n1 - 1); }
    double d2() const { return (dom.x2max - dom.x2min) / (n2 - 1); }
    double x1(int i) const { return dom.x1min + i * d1(); }
    double x2(int j) const { return dom.x2min + j * d2(); }
    Stencil3 s1(int i) const { return d1_stencil(i, n1, d1()); }
    Stencil3 s2(int j) const { return d1_stencil(j, n2, d2()); }
};

// Unknowns of the reduced problem: midsurface deformation and rotation per node.
// Dirichlet values are whatever m holds on masked nodes.
struct ShellState {
    int n1 = 0, n2 = 0;
    std::vector<Vec3> m;
    std::vector<Mat3> Q;
};

ShellState identity_state(const ShellGrid& g, const MidsurfacePatch& patch);

struct NodeKinematics {
    Mat32 dm;
    Mat3 dQ[2];
    Vec3 k[2];  // axl(skew(Q^T d_i Q))
    Mat3 E, K;
};

NodeKinematics node_kinematics(const ShellState& s, const ShellGrid& g,
                               const std::vector<SurfaceFrame>& frames, int i, int j);

// Integral of the limit density over omega (no thickness prefactor, no loads).
double j0_integral(const ShellState& s, const ShellGrid& g, const std::vector<SurfaceFrame>& frames,
                   const MaterialParams& mat, double* membrane = nullptr, double* curvature = nullptr);

void check_state(const ShellState& s, const ShellGrid& g);  // throws StateIOError

}  // namespace cshell
