#include "cshell/shellcore.hpp"

#include <iostream>

#include "cshell/errors.hpp"
#include "cshell/tolerances.hpp"

namespace cshell {

Mat3 strain_E(const Mat32& dm, const Mat3& Q, const SurfaceFrame& f) {
    Mat3 X = Mat3::Zero();
    X.leftCols<2>() = Q.transpose() * dm - f.dy_ref;
    return X * f.ginv;
}

namespace {
Vec3 tangent_rate(const Mat3& Q, const Mat3& dQ) {
    const Mat3 M = Q.transpose() * dQ;
    if (sym(M).norm() > 0.1 * skew(M).norm() + 1e-10)
        throw NotATangentDerivative("derivative is not tangent to SO(3) at Q");
    return axl_of_skew_part(M);
}
}  // namespace

Mat3 bendcurv_K_from_rates(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f) {
    Mat3 X = Mat3::Zero();
    X.col(0) = k1;
    X.col(1) = k2;
    return X * f.ginv;
}

Mat3 bendcurv_K(const Mat3& d1Q, const Mat3& d2Q, const Mat3& Q, const SurfaceFrame& f) {
    return bendcurv_K_from_rates(tangent_rate(Q, d1Q), tangent_rate(Q, d2Q), f);
}

Split split(const Mat3& X, const SurfaceFrame& f) {
    return {f.A * X, (Mat3::Identity() - f.A) * X};
}

StrainState strain_state(const Mat3& E, const Mat3& K, const SurfaceFrame& f) {
    return {E, K, split(E, f), split(K, f)};
}

void check_structured(const Mat3& X, const SurfaceFrame& f) {
    if ((X - X * f.A).norm() > tol::structural * X.norm())
        throw StructuralViolation("tensor does not have the (*|*|0)[grad Theta(0)]^-1 structure");
}

double w_shell(const Mat3& X, const MaterialParams& m) {
    const double t = X.trace();
    return m.mu * frob2(sym(X)) + m.mu_c * frob2(skew(X)) +
           m.lambda * m.mu / (m.lambda + 2.0 * m.mu) * t * t;
}

double w_shell_dev(const Mat3& X, const MaterialParams& m) {
    const double t = X.trace();
    return m.mu * frob2(dev(sym(X))) + m.mu_c * frob2(skew(X)) +
           2.0 * m.mu * (2.0 * m.lambda + m.mu) / (3.0 * (m.lambda + 2.0 * m.mu)) * t * t;
}

double shear_weight(const MaterialParams& m) { return 2.0 * m.mu * m.mu_c / (m.mu + m.mu_c); }

double w_mp_hom(const Mat3& E, const SurfaceFrame& f, const MaterialParams& m) {
    check_structured(E, f);
    return w_shell(f.A * E, m) + shear_weight(m) * (E.transpose() * f.n0).squaredNorm();
}

bool curvature_trace_weight_negative(const MaterialParams& m) { return m.b3() <= 0.0; }

double w_curv_hom(const Mat3& K, const SurfaceFrame& f, const MaterialParams& m) {
    check_structured(K, f);
    if (curvature_trace_weight_negative(m)) {
        static bool warned = false;
        if (!warned) {
            std::clog << "warning: b3 = (12 a3 - a1)/3 <= 0, curvature energy may be indefinite\n";
            warned = true;
        }
    }
    const double b1 = m.b1(), b2 = m.b2(), b3 = m.b3();
    const Mat3 Kp = f.A * K;
    const double t = Kp.trace();
    return m.mu * m.Lc * m.Lc *
           (b1 * frob2(sym(Kp)) + b2 * frob2(skew(Kp)) + b1 * b3 / (b1 + b3) * t * t +
            2.0 * b1 * b2 / (b1 + b2) * (K.transpose() * f.n0).squaredNorm());
}

Mat3 d_w_mp_hom(const Mat3& E, const SurfaceFrame& f, const MaterialParams& m) {
    const Mat3 Ep = f.A * E;
    const double c3 = m.lambda * m.mu / (m.lambda + 2.0 * m.mu);
    const Mat3 inner = 2.0 * m.mu * sym(Ep) + 2.0 * m.mu_c * skew(Ep) +
                       2.0 * c3 * Ep.trace() * Mat3::Identity();
    return f.A * inner + 2.0 * shear_weight(m) * f.n0 * (f.n0.transpose() * E);
}

Mat3 d_w_curv_hom(const Mat3& K, const SurfaceFrame& f, const MaterialParams& m) {
    const double b1 = m.b1(), b2 = m.b2(), b3 = m.b3();
    const Mat3 Kp = f.A * K;
    const Mat3 inner = 2.0 * b1 * sym(Kp) + 2.0 * b2 * skew(Kp) +
                       2.0 * b1 * b3 / (b1 + b3) * Kp.trace() * Mat3::Identity();
    return m.mu * m.Lc * m.Lc *
           (f.A * inner + 4.0 * b1 * b2 / (b1 + b2) * f.n0 * (f.n0.transpose() * K));
}

double density_J0(const Mat3& E, const Mat3& K, const SurfaceFrame& f, const MaterialParams& m) {
    return (w_mp_hom(E, f, m) + w_curv_hom(K, f, m)) * f.det0;
}

}  // namespace cshell
