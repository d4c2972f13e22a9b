#include <algorithm>
#include <cmath>

#include "cshell/errors.hpp"
#include "cshell/surface.hpp"

namespace cshell {

SurfaceFrame frame_from_jet(const PatchJet& jet) {
    SurfaceFrame f;
    f.dy = jet.dy;
    f.dy_ref = jet.dy;
    const Vec3 y1 = jet.dy.col(0), y2 = jet.dy.col(1);
    const Vec3 c = y1.cross(y2);
    const double cn = c.norm();
    if (!(cn >= 1e-12)) throw DegenerateSurface("surface is not an immersion at this point");
    f.n0 = c / cn;

    // d_i n0 = (I - n0 n0^T) d_i c / |c|
    const Mat3 P = Mat3::Identity() - f.n0 * f.n0.transpose();
    f.dn.col(0) = P * (jet.y11.cross(y2) + y1.cross(jet.y12)) / cn;
    f.dn.col(1) = P * (jet.y12.cross(y2) + y1.cross(jet.y22)) / cn;
    f.dn_ref = f.dn;

    f.grad_theta0 << y1, y2, f.n0;
    f.det0 = f.grad_theta0.determinant();
    f.ginv = f.grad_theta0.inverse();
    const Polar pd = polar_decompose(f.grad_theta0);
    f.Q0 = pd.R;
    f.U0 = pd.U;

    f.I = f.dy.transpose() * f.dy;
    f.II = -f.dy.transpose() * f.dn;
    f.L = f.I.inverse() * f.II;
    f.H = 0.5 * f.L.trace();
    f.K = f.L.determinant();
    // H^2 - K written without the cancellation that hurts near umbilics
    const double half = 0.5 * (f.L(0, 0) - f.L(1, 1));
    double disc = half * half + f.L(0, 1) * f.L(1, 0);
    if (disc < 0.0) {
        if (disc < -1e-10 * std::max(1.0, f.H * f.H))
            throw DegenerateSurface("shape operator has complex eigenvalues");
        disc = 0.0;
    }
    const double s = std::sqrt(disc);
    f.kappa1 = f.H + s;
    f.kappa2 = f.H - s;

    const Projectors pr = projectors(f, f.dn);
    f.A = pr.A;
    f.B = pr.B;
    f.C = pr.C;
    return f;
}

SurfaceFrame frame_at(const MidsurfacePatch& patch, double x1, double x2) {
    return frame_from_jet(patch.jet(x1, x2));
}

Mat3 grad_theta_ref(const SurfaceFrame& f, double x3) {
    Mat3 g;
    g << f.dy_ref + x3 * f.dn_ref, f.n0;
    return g;
}

Mat3 grad_theta(const SurfaceFrame& f, const Mat32& dn, double x3) {
    Mat3 g = f.grad_theta0;
    g.leftCols<2>() += x3 * dn;
    return g;
}

double det_grad_theta(const SurfaceFrame& f, double x3) {
    return f.det0 * (1.0 - 2.0 * f.H * x3 + f.K * x3 * x3);
}

Projectors projectors(const SurfaceFrame& f, const Mat32& dn) {
    Projectors p;
    Mat3 Y = Mat3::Zero();
    Y.leftCols<2>() = f.dy;
    p.A = Y * f.ginv;
    Mat3 N = Mat3::Zero();
    N.leftCols<2>() = dn;
    p.B = -N * f.ginv;
    Mat3 J = Mat3::Zero();
    J(0, 1) = 1.0;
    J(1, 0) = -1.0;
    p.C = f.det0 * f.ginv.transpose() * J * f.ginv;
    return p;
}

double max_abs_curvature(const MidsurfacePatch& patch, int n1, int n2) {
    const Domain& d = patch.domain();
    double m = 0.0;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double x1 = d.x1min + (d.x1max - d.x1min) * i / std::max(1, n1 - 1);
            const double x2 = d.x2min + (d.x2max - d.x2min) * j / std::max(1, n2 - 1);
            const SurfaceFrame f = frame_at(patch, x1, x2);
            m = std::max({m, std::abs(f.kappa1), std::abs(f.kappa2)});
        }
    return m;
}

bool thickness_admissible(const MidsurfacePatch& patch, double h, int n1, int n2) {
    return h * max_abs_curvature(patch, n1, n2) < 2.0;
}

}  // namespace cshell
