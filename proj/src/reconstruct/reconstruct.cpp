#include "cshell/reconstruct.hpp"

#include <gsl/gsl_multimin.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

Mat3 biot_stress(const Mat3& U, const MaterialParams& m) {
    const Mat3 X = U - Mat3::Identity();
    return 2.0 * m.mu * sym(X) + 2.0 * m.mu_c * skew(X) + m.lambda * X.trace() * Mat3::Identity();
}

Mat3 stretch_with_director(const Mat32& dm, const Vec3& c, const Mat3& Q, const SurfaceFrame& f) {
    Mat3 F;
    F << dm, c;
    return Q.transpose() * F * f.ginv;
}

Vec3 optimal_director(const Mat3& E, const Mat3& Q, const SurfaceFrame& f, const MaterialParams& m) {
    const double beta = m.lambda / (2.0 * m.mu + m.lambda);
    const double gamma = (m.mu_c - m.mu) / (m.mu_c + m.mu);
    return (1.0 - beta * E.trace()) * (Q * f.n0) + gamma * (Q * (E.transpose() * f.n0));
}

namespace {

double curv_with_rate(const Vec3& k1, const Vec3& k2, const Vec3& a, const SurfaceFrame& f,
                      const MaterialParams& m) {
    Mat3 X;
    X << k1, k2, a;
    return w_curv_tilde(X * f.ginv, m);
}

}  // namespace

Skew3 optimal_rotation_rate(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f,
                            const MaterialParams& m) {
    // q(a) = q0 + 2 b.a + a.H a, probed on the canonical basis.
    auto q = [&](const Vec3& a) { return curv_with_rate(k1, k2, a, f, m); };
    const double q0 = q(Vec3::Zero());
    Mat3 H;
    Vec3 b, qp, qm;
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        qp(i) = q(e);
        qm(i) = q(-e);
        b(i) = 0.25 * (qp(i) - qm(i));
        H(i, i) = 0.5 * (qp(i) + qm(i)) - q0;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            H(i, j) = H(j, i) =
                0.5 * (q(Vec3::Unit(i) + Vec3::Unit(j)) - q0 - 2.0 * (b(i) + b(j)) - H(i, i) - H(j, j));
    Eigen::LLT<Mat3> llt(H);
    if (llt.info() != Eigen::Success) throw SingularSystem("curvature normal matrix is not SPD");
    return Skew3(llt.solve(-b));
}

namespace {

struct DirectorProblem {
    const Mat32* dm;
    const Mat3* Q;
    const SurfaceFrame* f;
    const MaterialParams* m;
};

double director_objective(const gsl_vector* x, void* params) {
    const auto* p = static_cast<const DirectorProblem*>(params);
    const Vec3 c(gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2));
    return w_mp(stretch_with_director(*p->dm, c, *p->Q, *p->f), *p->m);
}

OracleResult nelder_mead(DirectorProblem& prob, const Vec3& start, double step) {
    gsl_multimin_function fn{&director_objective, 3, &prob};
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector* ss = gsl_vector_alloc(3);
    for (int i = 0; i < 3; ++i) {
        gsl_vector_set(x, i, start(i));
        gsl_vector_set(ss, i, step);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);
    for (int it = 0; it < 20000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
    }
    OracleResult r;
    for (int i = 0; i < 3; ++i) r.arg(i) = gsl_vector_get(s->x, i);
    r.value = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(ss);
    return r;
}

}  // namespace

OracleResult brute_force_director(const Mat32& dm, const Mat3& Q, const SurfaceFrame& f,
                                  const MaterialParams& mat, unsigned seed) {
    DirectorProblem prob{&dm, &Q, &f, &mat};
    const Vec3 qn = Q * f.n0;
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::array<Vec3, 8> starts = {qn, -qn, 2.0 * qn, -2.0 * qn, 0.5 * qn, -0.5 * qn,
                                  Vec3(nd(rng), nd(rng), nd(rng)), Vec3(nd(rng), nd(rng), nd(rng))};
    OracleResult best{Vec3::Zero(), std::numeric_limits<double>::infinity()};
    for (const Vec3& s0 : starts) {
        OracleResult r = nelder_mead(prob, s0, 0.5);
        // restart from the result to shake off simplex collapse
        r = nelder_mead(prob, r.arg, 1e-3);
        if (r.value < best.value) best = r;
    }
    return best;
}

OracleResult brute_force_rotation_rate(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f,
                                       const MaterialParams& mat) {
    auto q = [&](const Vec3& a) { return curv_with_rate(k1, k2, a, f, mat); };
    Vec3 centre = Vec3::Zero();
    double r = 4.0 * (k1.norm() + k2.norm()) * std::max(1.0, f.ginv.norm()) + 1.0;
    constexpr int N = 11;
    double best = q(centre);
    for (int level = 0; level < 80 && r > 1e-15; ++level) {
        Vec3 arg = centre;
        bool on_edge = false;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c) {
                    const Vec3 p = centre + r * Vec3(2.0 * a / (N - 1) - 1.0, 2.0 * b / (N - 1) - 1.0,
                                                     2.0 * c / (N - 1) - 1.0);
                    const double v = q(p);
                    if (v < best) {
                        best = v;
                        arg = p;
                        on_edge = (a == 0 || a == N - 1 || b == 0 || b == N - 1 || c == 0 || c == N - 1);
                    }
                }
        centre = arg;
        r *= on_edge ? 2.0 : 0.4;
    }
    return {centre, best};
}

std::vector<Reconstruction> reconstruct_state(const ShellState& s, const ShellGrid& g,
                                              const std::vector<SurfaceFrame>& frames,
                                              const MaterialParams& mat) {
    check_state(s, g);
    std::vector<Reconstruction> out(g.size());
    parallel_rows(g.n2, [&](int j) {
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const NodeKinematics nk = node_kinematics(s, g, frames, i, j);
            out[p].d_star = optimal_director(nk.E, s.Q[p], frames[p], mat);
            out[p].A_star = optimal_rotation_rate(nk.k[0], nk.k[1], frames[p], mat);
        }
    });
    return out;
}

ThickFields recovery_fields(double h, const ShellState& s, const ShellGrid& g,
                            const std::vector<Reconstruction>& rec, int n3) {
    ThickFields t;
    t.n1 = g.n1;
    t.n2 = g.n2;
    t.n3 = n3;
    t.h = h;
    t.dom = g.dom;
    const size_t n = static_cast<size_t>(t.n1) * t.n2 * t.n3;
    t.phi.resize(n);
    t.Q.resize(n);
    for (int k = 0; k < n3; ++k) {
        const double x3 = h * t.eta3(k);
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                const size_t p = g.node(i, j), q = t.index(i, j, k);
                t.phi[q] = s.m[p] + x3 * rec[p].d_star;
                t.Q[q] = s.Q[p] * exp_so3(Vec3(x3 * rec[p].A_star.axial())).m();
            }
    }
    return t;
}

GammaGap gamma_gap(double h, const ShellState& s, const ShellGrid& g, const MidsurfacePatch& patch,
                   const MaterialParams& mat, int n3) {
    const auto frames = frames_on_lattice(patch, g.dom, g.n1, g.n2);
    GammaGap r;
    r.h = h;
    r.j0 = j0_integral(s, g, frames, mat);
    const auto rec = reconstruct_state(s, g, frames, mat);
    r.scaled3d = scaled_energy(recovery_fields(h, s, g, rec, n3), patch, mat);
    r.gap = r.scaled3d - r.j0;
    return r;
}

}  // namespace cshell
