#include "cshell/linshell.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/sampling.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

Mat3 lin_strain(const Mat32& dv, const Vec3& theta, const SurfaceFrame& f) {
    Mat3 X = Mat3::Zero();
    X.leftCols<2>() = dv - anti(theta) * f.dy_ref;
    return X * f.ginv;
}

Mat3 lin_bendcurv(const Mat32& dtheta, const SurfaceFrame& f) {
    Mat3 X = Mat3::Zero();
    X.leftCols<2>() = dtheta;
    return X * f.ginv;
}

EnergyBreakdown lin_energy(const LinearState& s, const ShellModel& model) {
    const ShellGrid& g = model.grid;
    if (s.n1 != g.n1 || s.n2 != g.n2 || s.v.size() != g.size() || s.theta.size() != g.size())
        throw StateIOError("linear state does not match the grid");
    std::vector<double> mem(g.n2), cur(g.n2);
    parallel_rows(g.n2, [&](int j) {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const Stencil3 s1 = g.s1(i), s2 = g.s2(j);
            Mat32 dv = Mat32::Zero(), dt = Mat32::Zero();
            for (int k = 0; k < 3; ++k) {
                dv.col(0) += s1.w[k] * s.v[g.node(s1.idx[k], j)];
                dv.col(1) += s2.w[k] * s.v[g.node(i, s2.idx[k])];
                dt.col(0) += s1.w[k] * s.theta[g.node(s1.idx[k], j)];
                dt.col(1) += s2.w[k] * s.theta[g.node(i, s2.idx[k])];
            }
            const SurfaceFrame& f = model.frames[p];
            const double w = g.weight[p] * f.det0;
            a += w * w_mp_hom(lin_strain(dv, s.theta[p], f), f, model.mat);
            b += w * w_curv_hom(lin_bendcurv(dt, f), f, model.mat);
        }
        mem[j] = a;
        cur[j] = b;
    });
    EnergyBreakdown e;
    for (int j = 0; j < g.n2; ++j) {
        e.membrane += mem[j];
        e.curvature += cur[j];
    }
    e.membrane *= model.prefactor();
    e.curvature *= model.prefactor();
    e.total = e.membrane + e.curvature;
    return e;
}

ShellState nonlinear_from_linear(const LinearState& s, const ShellModel& model, double eps) {
    ShellState out;
    out.n1 = s.n1;
    out.n2 = s.n2;
    out.m.resize(s.v.size());
    out.Q.resize(s.v.size());
    for (size_t p = 0; p < s.v.size(); ++p) {
        out.m[p] = model.y0[p] + eps * s.v[p];
        out.Q[p] = exp_so3(Vec3(eps * s.theta[p])).m();
    }
    return out;
}

SixParamCoeffs identify_6param(const MaterialParams& m, double h) {
    SixParamCoeffs c;
    c.alpha[0] = h * 2.0 * m.mu * m.lambda / (2.0 * m.mu + m.lambda);
    c.alpha[1] = h * (m.mu - m.mu_c);
    c.alpha[2] = h * (m.mu + m.mu_c);
    c.alpha[3] = h * 2.0 * m.mu * m.mu_c / (m.mu + m.mu_c);
    const double L2 = m.mu * m.Lc * m.Lc, b1 = m.b1(), b2 = m.b2(), b3 = m.b3();
    c.beta[0] = 2.0 * L2 * b1 * b3 / (b1 + b3);
    c.beta[1] = L2 * b1;
    c.beta[2] = L2 * (b1 + b2);
    c.beta[3] = 4.0 * L2 * b1 * b2 / (b1 + b2);
    c.mu_c_drill = c.alpha[2] - c.alpha[1];
    return c;
}

namespace {
double six_param_form(const Mat3& X, const SurfaceFrame& f, const double w[4]) {
    const Mat3 P = f.A * X;
    const double t = P.trace();
    return w[0] * t * t + w[1] * (P * P).trace() + w[2] * (P.transpose() * P).trace() +
           w[3] * (X.transpose() * f.n0).squaredNorm();
}
}  // namespace

double two_w_plane_ep(const Mat3& E, const SurfaceFrame& f, const SixParamCoeffs& c) {
    return six_param_form(E, f, c.alpha);
}

double two_w_curv_ep(const Mat3& K, const SurfaceFrame& f, const SixParamCoeffs& c) {
    return six_param_form(K, f, c.beta);
}

double algebraic_mean_weight(const MaterialParams& m) { return 0.5 * (m.mu + m.mu_c); }

double flat_shell_energy(const MidsurfacePatch& patch, const Mat32& dm, const Mat3& R,
                         const MaterialParams& m) {
    if (patch.kind() != PatchKind::Plate) throw NotFlat("flat-shell formula needs the identity plate");
    const Mat2 X = R.leftCols<2>().transpose() * dm - Mat2::Identity();
    const Mat2 S = 0.5 * (X + X.transpose()), W = 0.5 * (X - X.transpose());
    const Vec3 r3 = R.col(2);
    const double s1 = r3.dot(dm.col(0)), s2 = r3.dot(dm.col(1));
    return m.mu * S.squaredNorm() + m.mu_c * W.squaredNorm() +
           m.lambda * m.mu / (m.lambda + 2.0 * m.mu) * X.trace() * X.trace() +
           shear_weight(m) * (s1 * s1 + s2 * s2);
}

bool ComparisonReport::all_agree() const {
    for (const auto& r : rows)
        if (r.compared && !r.agree) return false;
    return true;
}

ComparisonReport reissner_mindlin_check(const MaterialParams& mat, double h, double shear_correction,
                                        double alpha1, double alpha3) {
    const SurfaceFrame f = frame_at(MidsurfacePatch::plate(Domain{}), 0.5, 0.5);
    auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    ComparisonReport rep;
    auto add = [&](const std::string& q, double ours, double ref) {
        rep.rows.push_back({q, ours, ref, true, close(ours, ref)});
    };

    // Weights are read off the linearized flat model on probe states with the
    // drill rotation theta_3 switched off.
    Mat32 dv;
    dv << 0, 1, 1, 0, 0, 0;
    add("membrane sym weight", w_mp_hom(lin_strain(dv, Vec3::Zero(), f), f, mat) / 2.0, mat.mu);
    dv << 0, 0, 0, 0, 1, 0;
    add("transverse shear weight", w_mp_hom(lin_strain(dv, Vec3::Zero(), f), f, mat),
        2.0 * mat.mu * mat.mu_c / (mat.mu + mat.mu_c));
    dv << 1, 0, 0, 1, 0, 0;
    add("membrane trace weight",
        (w_mp_hom(lin_strain(dv, Vec3::Zero(), f), f, mat) - 2.0 * mat.mu) / 4.0,
        mat.mu * mat.lambda / (2.0 * mat.mu + mat.lambda));

    MaterialParams mc = mat;
    mc.a1 = alpha1 / 2.0;
    mc.a3 = (alpha3 / 4.0 * 3.0 + mc.a1) / 12.0;  // so that b3 = alpha3/4
    Mat32 dt;
    dt << 1, 0, 0, 1, 0, 0;
    const double scale = mat.mu * mat.Lc * mat.Lc / 2.0;
    const double wk = w_curv_hom(lin_bendcurv(dt, f), f, mc);
    add("curvature sym weight",
        [&] {
            Mat32 d;
            d << 0, 1, 1, 0, 0, 0;
            return w_curv_hom(lin_bendcurv(d, f), f, mc) / 2.0 / scale;
        }(),
        alpha1);
    add("curvature trace weight", (wk - 2.0 * scale * alpha1) / 4.0 / scale,
        alpha1 * alpha3 / (2.0 * alpha1 + alpha3));

    add("1/2 H(mu, lambda/2)", 0.5 * harmonic(mat.mu, mat.lambda / 2.0),
        mat.mu * mat.lambda / (2.0 * mat.mu + mat.lambda));
    add("H(mu, mu_c)", harmonic(mat.mu, mat.mu_c), 2.0 * mat.mu * mat.mu_c / (mat.mu + mat.mu_c));
    add("1/2 H(alpha1, alpha3/2)", 0.5 * harmonic(alpha1, alpha3 / 2.0),
        alpha1 * alpha3 / (2.0 * alpha1 + alpha3));

    rep.rows.push_back({"Reissner-Mindlin shear kappa*mu/2", std::nan(""),
                        shear_correction * mat.mu / 2.0, false, false});
    rep.rows.push_back({"Reissner-Mindlin bending h^3/12 * mu", std::nan(""),
                        h * h * h / 12.0 * mat.mu, false, false});
    return rep;
}

void write_report_table(std::ostream& os, const ComparisonReport& r) {
    os << std::left << std::setw(40) << "quantity" << std::setw(22) << "gamma-model" << std::setw(22)
       << "reference" << "status\n";
    os << std::setprecision(15);
    for (const auto& row : r.rows) {
        os << std::setw(40) << row.quantity << std::setw(22);
        if (row.compared)
            os << row.gamma_model;
        else
            os << "-";
        os << std::setw(22) << row.reference
           << (row.compared ? (row.agree ? "match" : "MISMATCH") : "not in membrane model") << '\n';
    }
}

void write_report_csv(std::ostream& os, const ComparisonReport& r) {
    os << "quantity,gamma_model,reference,compared,agree\n" << std::setprecision(17);
    for (const auto& row : r.rows) {
        os << row.quantity << ',';
        if (row.compared) os << row.gamma_model;
        os << ',' << row.reference << ',' << (row.compared ? 1 : 0) << ',' << (row.agree ? 1 : 0)
           << '\n';
    }
}

double w_shell_bilinear(const Mat3& X, const Mat3& Y, const MaterialParams& m) {
    return m.mu * (sym(X).cwiseProduct(sym(Y))).sum() + m.mu_c * (skew(X).cwiseProduct(skew(Y))).sum() +
           m.lambda * m.mu / (m.lambda + 2.0 * m.mu) * X.trace() * Y.trace();
}

double w_coss(const Mat3& X, const Mat3& Y, const SurfaceFrame& f, const MaterialParams& m) {
    const Split sx = split(X, f), sy = split(Y, f);
    return w_shell_bilinear(sx.par, sy.par, m) + shear_weight(m) * sx.perp.cwiseProduct(sy.perp).sum();
}

IdentityCheck birsan_identity_check(const MaterialParams& mat, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    IdentityCheck c{true, 0.0};
    for (int k = 0; k < samples; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 X = random_structured(rng, f);
        const double a = w_mp_hom(X, f, mat), b = w_coss(X, X, f, mat);
        const double err = std::abs(a - b) / std::max(1.0, std::abs(a));
        c.max_error = std::max(c.max_error, err);
        if (err > 1e-12) c.pass = false;
    }
    return c;
}

}  // namespace cshell
