#include "cshell/cosserat3d.hpp"

#include <cmath>

#include "cshell/errors.hpp"
#include "cshell/fd.hpp"
#include "cshell/parallel.hpp"

namespace cshell {

MaterialParams MaterialParams::make(double mu, double lambda, double mu_c, double Lc, double a1,
                                    double a2, double a3) {
    MaterialParams m;
    m.mu = mu;
    m.lambda = lambda;
    m.mu_c = mu_c;
    m.Lc = Lc;
    m.a1 = a1;
    m.a2 = a2;
    m.a3 = a3;
    m.validate();
    return m;
}

void MaterialParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw InvalidMaterial(what);
    };
    need(std::isfinite(mu) && mu > 0.0, "mu must be positive");
    need(std::isfinite(lambda) && kappa() > 0.0, "bulk modulus (2mu+3lambda)/3 must be positive");
    need(std::isfinite(mu_c) && mu_c > 0.0, "mu_c must be positive");
    need(std::isfinite(Lc) && Lc > 0.0, "Lc must be positive");
    need(a1 > 0.0 && a2 > 0.0 && a3 > 0.0, "curvature weights a1, a2, a3 must be positive");
}

double w_mp_form(const Mat3& X, const MaterialParams& m) {
    const Mat3 S = sym(X);
    const double t = S.trace();
    return m.mu * frob2(dev(S)) + m.mu_c * frob2(skew(X)) + 0.5 * m.kappa() * t * t;
}

double w_mp(const Mat3& U, const MaterialParams& m) {
    return w_mp_form(U - Mat3::Identity(), m);
}

double w_mp_lame(const Mat3& U, const MaterialParams& m) {
    const Mat3 X = U - Mat3::Identity();
    const Mat3 S = sym(X);
    const double t = S.trace();
    return m.mu * frob2(S) + m.mu_c * frob2(skew(X)) + 0.5 * m.lambda * t * t;
}

double w_curv_tilde(const Mat3& G, const MaterialParams& m) {
    const double t = G.trace();
    return m.mu * m.Lc * m.Lc *
           (m.a1 * frob2(dev(sym(G))) + m.a2 * frob2(skew(G)) + 4.0 * m.a3 * t * t);
}

double w_curv_tilde_bform(const Mat3& G, const MaterialParams& m) {
    const double t = G.trace();
    return m.mu * m.Lc * m.Lc * (m.b1() * frob2(sym(G)) + m.b2() * frob2(skew(G)) + m.b3() * t * t);
}

Mat3 d_w_curv_tilde(const Mat3& G, const MaterialParams& m) {
    return m.mu * m.Lc * m.Lc *
           (2.0 * m.a1 * dev(sym(G)) + 2.0 * m.a2 * skew(G) +
            8.0 * m.a3 * G.trace() * Mat3::Identity());
}

CoercivityMargin coercivity_margin(const Mat3& X, const MaterialParams& m) {
    // Orthonormal basis of Sym(3) and the Gram matrix of the form on it.
    Mat3 basis[6];
    int k = 0;
    for (int i = 0; i < 3; ++i) {
        basis[k] = Mat3::Zero();
        basis[k](i, i) = 1.0;
        ++k;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            basis[k] = Mat3::Zero();
            basis[k](i, j) = basis[k](j, i) = std::sqrt(0.5);
            ++k;
        }
    Eigen::Matrix<double, 6, 6> Gm;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const double qab = w_mp_form(basis[a] + basis[b], m);
            const double qa = w_mp_form(basis[a], m), qb = w_mp_form(basis[b], m);
            Gm(a, b) = 0.5 * (qab - qa - qb);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(Gm);
    CoercivityMargin c;
    c.c_min = es.eigenvalues().minCoeff();
    c.c_max = es.eigenvalues().maxCoeff();
    const double s2 = frob2(sym(X)), k2 = frob2(skew(X));
    c.value = w_mp_form(X, m);
    c.lower = c.c_min * s2 + m.mu_c * k2;
    c.upper = c.c_max * s2 + m.mu_c * k2;
    return c;
}

Vec3 rotation_rate(const Mat3& Q, const Mat3& dQ, double spacing) {
    const Mat3 M = Q.transpose() * dQ;
    const double rs = sym(M).norm(), rk = skew(M).norm();
    if (rs > 0.1 * rk + 1e-10 + spacing * spacing) throw GridTooCoarse("rotation field under-resolved by the grid");
    return axl_of_skew_part(M);
}

std::vector<SurfaceFrame> frames_on_lattice(const MidsurfacePatch& patch, const Domain& dom,
                                            int n1, int n2) {
    std::vector<SurfaceFrame> out(static_cast<size_t>(n1) * n2);
    const double d1 = (dom.x1max - dom.x1min) / (n1 - 1), d2 = (dom.x2max - dom.x2min) / (n2 - 1);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i)
            out[static_cast<size_t>(j) * n1 + i] = frame_at(patch, dom.x1min + i * d1, dom.x2min + j * d2);
    auto y = [&](int i, int j) { return patch.y0(dom.x1min + i * d1, dom.x2min + j * d2); };
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            const Stencil3 a = d1_stencil(i, n1, d1), b = d1_stencil(j, n2, d2);
            SurfaceFrame& f = out[static_cast<size_t>(j) * n1 + i];
            f.dy_ref.setZero();
            f.dn_ref.setZero();
            for (int k = 0; k < 3; ++k) {
                f.dy_ref.col(0) += a.w[k] * y(a.idx[k], j);
                f.dy_ref.col(1) += b.w[k] * y(i, b.idx[k]);
                f.dn_ref.col(0) += a.w[k] * out[static_cast<size_t>(j) * n1 + a.idx[k]].n0;
                f.dn_ref.col(1) += b.w[k] * out[static_cast<size_t>(b.idx[k]) * n1 + i].n0;
            }
        }
    return out;
}

namespace {

template <class T, class Get>
T apply(const Stencil3& s, Get get) {
    T acc = s.w[0] * get(s.idx[0]);
    acc += s.w[1] * get(s.idx[1]);
    acc += s.w[2] * get(s.idx[2]);
    return acc;
}

void check_shape(const ThickFields& f, const std::vector<SurfaceFrame>& frames) {
    if (f.n1 < 3 || f.n2 < 3 || f.n3 < 3) throw GridTooCoarse("thick grid needs at least 3 samples per axis");
    const size_t n = static_cast<size_t>(f.n1) * f.n2 * f.n3;
    if (f.phi.size() != n || f.Q.size() != n || frames.size() != static_cast<size_t>(f.n1) * f.n2)
        throw GridTooCoarse("thick field containers do not match the grid");
}

}  // namespace

std::vector<Mat3> wryness_field(const ThickFields& f, const std::vector<SurfaceFrame>& frames) {
    check_shape(f, frames);
    std::vector<Mat3> out(f.phi.size());
    parallel_rows(f.n3 * f.n2, [&](int row) {
        const int k = row / f.n2, j = row % f.n2;
        for (int i = 0; i < f.n1; ++i) {
            const Mat3& Q = f.Q[f.index(i, j, k)];
            const Stencil3 s1 = d1_stencil(i, f.n1, f.dx1());
            const Stencil3 s2 = d1_stencil(j, f.n2, f.dx2());
            const Stencil3 s3 = d1_stencil(k, f.n3, f.deta());
            const Mat3 d1 = apply<Mat3>(s1, [&](int a) { return f.Q[f.index(a, j, k)]; });
            const Mat3 d2 = apply<Mat3>(s2, [&](int a) { return f.Q[f.index(i, a, k)]; });
            const Mat3 d3 = apply<Mat3>(s3, [&](int a) { return f.Q[f.index(i, j, a)]; });
            Mat3 G;
            G << rotation_rate(Q, d1, f.dx1()), rotation_rate(Q, d2, f.dx2()), rotation_rate(Q, d3, f.deta()) / f.h;
            const SurfaceFrame& fr = frames[static_cast<size_t>(j) * f.n1 + i];
            out[f.index(i, j, k)] = G * grad_theta_ref(fr, f.h * f.eta3(k)).inverse();
        }
    });
    return out;
}

std::vector<Mat3> stretch_field(const ThickFields& f, const std::vector<SurfaceFrame>& frames) {
    check_shape(f, frames);
    std::vector<Mat3> out(f.phi.size());
    parallel_rows(f.n3 * f.n2, [&](int row) {
        const int k = row / f.n2, j = row % f.n2;
        for (int i = 0; i < f.n1; ++i) {
            const Stencil3 s1 = d1_stencil(i, f.n1, f.dx1());
            const Stencil3 s2 = d1_stencil(j, f.n2, f.dx2());
            const Stencil3 s3 = d1_stencil(k, f.n3, f.deta());
            Mat3 F;
            F << apply<Vec3>(s1, [&](int a) { return f.phi[f.index(a, j, k)]; }),
                apply<Vec3>(s2, [&](int a) { return f.phi[f.index(i, a, k)]; }),
                apply<Vec3>(s3, [&](int a) { return f.phi[f.index(i, j, a)]; }) / f.h;
            const SurfaceFrame& fr = frames[static_cast<size_t>(j) * f.n1 + i];
            out[f.index(i, j, k)] =
                f.Q[f.index(i, j, k)].transpose() * F * grad_theta_ref(fr, f.h * f.eta3(k)).inverse();
        }
    });
    return out;
}

double scaled_energy(const ThickFields& f, const MidsurfacePatch& patch, const MaterialParams& mat) {
    if (f.n3 % 2 == 0) throw GridTooCoarse("through-thickness sample count must be odd");
    const auto frames = frames_on_lattice(patch, f.dom, f.n1, f.n2);
    const auto U = stretch_field(f, frames);
    const auto Gam = wryness_field(f, frames);
    return reduce_rows(f.n2, [&](int j) {
        double s = 0.0;
        const double wj = trapezoid_weight(j, f.n2, f.dx2());
        for (int i = 0; i < f.n1; ++i) {
            const double wij = wj * trapezoid_weight(i, f.n1, f.dx1());
            const SurfaceFrame& fr = frames[static_cast<size_t>(j) * f.n1 + i];
            for (int k = 0; k < f.n3; ++k) {
                const size_t p = f.index(i, j, k);
                const double w = wij * simpson_weight(k, f.n3, f.deta());
                s += w * (w_mp(U[p], mat) + w_curv_tilde(Gam[p], mat)) *
                     det_grad_theta(fr, f.h * f.eta3(k));
            }
        }
        return s;
    });
}

}  // namespace cshell
