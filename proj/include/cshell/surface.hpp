#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cshell/rotalg.hpp"

namespace cshell {

enum class PatchKind { Plate, Cylinder, SphereCap, Graph, Tabulated };

std::string to_string(PatchKind k);
PatchKind patch_kind_from_string(const std::string& s);  // throws ConfigError

struct Domain {
    double x1min = 0.0, x1max = 1.0;
    double x2min = 0.0, x2max = 1.0;
    double area() const { return (x1max - x1min) * (x2max - x2min); }
};

// Value and first/second partial derivatives of y0 at a point.
struct PatchJet {
    Vec3 y;
    Mat32 dy;
    Vec3 y11, y12, y22;
};

// z = c0 + c1 x1 + c2 x2 + c3 x1^2 + c4 x1 x2 + c5 x2^2
struct GraphPoly {
    double c[6] = {0, 0, 0, 0, 0, 0};
};

struct TabulatedGrid {
    int nx = 0, ny = 0;
    Domain dom;
    std::vector<Vec3> pts;  // index i*ny + j, i along x1
    const Vec3& at(int i, int j) const { return pts[static_cast<size_t>(i) * ny + j]; }
};

TabulatedGrid read_tabulated_grid(const std::string& path);  // throws ConfigError

class MidsurfacePatch {
public:
    static MidsurfacePatch plate(const Domain& dom);
    // y0 = (R cos x1, R sin x1, x2)
    static MidsurfacePatch cylinder(double R, const Domain& dom);
    // upper spherical cap written as the graph z = sqrt(R^2 - x1^2 - x2^2)
    static MidsurfacePatch sphere_cap(double R, const Domain& dom);
    static MidsurfacePatch graph(const GraphPoly& g, const Domain& dom);
    static MidsurfacePatch tabulated(const TabulatedGrid& grid);

    PatchKind kind() const { return kind_; }
    const Domain& domain() const { return dom_; }
    double radius() const { return radius_; }
    const GraphPoly& graph_poly() const { return poly_; }

    PatchJet jet(double x1, double x2) const;
    Vec3 y0(double x1, double x2) const { return jet(x1, x2).y; }

private:
    struct TabData;
    PatchKind kind_ = PatchKind::Plate;
    Domain dom_;
    double radius_ = 1.0;
    GraphPoly poly_;
    std::shared_ptr<const TabData> tab_;
};

struct SurfaceFrame {
    Mat32 dy;           // grad y0
    // Reference tangent the strain is measured against. Equal to dy for a
    // single point; on a lattice it is the difference quotient of y0, so the
    // undeformed state is strain-free at the discrete level too.
    Mat32 dy_ref;
    Mat32 dn_ref;       // same treatment for grad n0
    Mat32 dn;           // grad n0
    Vec3 n0;
    Mat3 grad_theta0;   // (grad y0 | n0)
    Mat3 ginv;          // [grad Theta(0)]^{-1}
    Rot3 Q0;
    Mat3 U0;
    double det0 = 1.0;
    Mat2 I, II, L;
    double H = 0.0, K = 0.0;
    double kappa1 = 0.0, kappa2 = 0.0;
    Mat3 A, B, C;
};

SurfaceFrame frame_at(const MidsurfacePatch& patch, double x1, double x2);
SurfaceFrame frame_from_jet(const PatchJet& jet);

Mat3 grad_theta(const SurfaceFrame& f, const Mat32& dn, double x3);
inline Mat3 grad_theta(const SurfaceFrame& f, double x3) { return grad_theta(f, f.dn, x3); }
double det_grad_theta(const SurfaceFrame& f, double x3);
// (dy_ref + x3 dn_ref | n0): the lattice counterpart of grad_theta.
Mat3 grad_theta_ref(const SurfaceFrame& f, double x3);

struct Projectors {
    Mat3 A, B, C;
};
Projectors projectors(const SurfaceFrame& f, const Mat32& dn);

double max_abs_curvature(const MidsurfacePatch& patch, int n1, int n2);
bool thickness_admissible(const MidsurfacePatch& patch, double h, int n1 = 33, int n2 = 33);

}  // namespace cshell
