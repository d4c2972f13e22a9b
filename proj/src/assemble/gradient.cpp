#include <cmath>

#include "cshell/assemble.hpp"
#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/reconstruct.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

double Gradient::inf_norm() const {
    double n = 0.0;
    for (const auto& v : gm) n = std::max(n, v.cwiseAbs().maxCoeff());
    for (const auto& v : gq) n = std::max(n, v.cwiseAbs().maxCoeff());
    return n;
}

double Gradient::dot(const Gradient& o) const {
    double s = 0.0;
    for (size_t p = 0; p < gm.size(); ++p) s += gm[p].dot(o.gm[p]) + gq[p].dot(o.gq[p]);
    return s;
}

namespace {

// Contributions computed at one node, scattered to its stencil afterwards.
struct NodeContrib {
    Mat3 V;                // Q S_E G^T; its first two columns pair with the m stencils
    Vec3 gm_own;           // direct m gradient (dead loads)
    Vec3 gq_own;           // rotation gradient at the node itself
    Vec3 gq_nb[2][3];      // rotation gradient sent to stencil neighbours
};

// Linear map w -> axl(skew(R anti(w))), assembled column by column.
Mat3 skew_rate_map(const Mat3& R) {
    Mat3 J;
    for (int l = 0; l < 3; ++l) J.col(l) = axl_of_skew_part(R * anti(Vec3::Unit(l)));
    return J;
}

// a -> w_curv_tilde((0|0|a) G) as a symmetric 3x3 matrix.
Mat3 rate_hessian(const SurfaceFrame& f, const MaterialParams& mat) {
    auto q = [&](const Vec3& a) {
        Mat3 X = Mat3::Zero();
        X.col(2) = a;
        return w_curv_tilde(X * f.ginv, mat);
    };
    Mat3 H;
    for (int i = 0; i < 3; ++i) H(i, i) = q(Vec3::Unit(i));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            H(i, j) = H(j, i) = 0.5 * (q(Vec3::Unit(i) + Vec3::Unit(j)) - H(i, i) - H(j, j));
    return H;
}

NodeContrib node_contrib(const ShellState& s, const ShellModel& model, int i, int j) {
    const ShellGrid& g = model.grid;
    const MaterialParams& mat = model.mat;
    const LoadSpec& L = model.loads;
    const size_t p = g.node(i, j);
    const SurfaceFrame& f = model.frames[p];
    const Mat3& Q = s.Q[p];
    const double x1 = g.x1(i), x2 = g.x2(j), h = model.h, w = g.weight[p];
    const NodeKinematics nk = node_kinematics(s, g, model.frames, i, j);

    const double c = model.prefactor() * w * f.det0;
    Mat3 SE = c * d_w_mp_hom(nk.E, f, mat);
    Mat3 SK = c * d_w_curv_hom(nk.K, f, mat);

    NodeContrib out;
    out.gm_own = Vec3::Zero();
    out.gq_own = Vec3::Zero();

    if (!L.N0.is_zero()) out.gm_own -= h * w * L.N0.at(x1, x2);

    if (L.include_M1 && !L.M1.is_zero()) {
        const double beta = mat.lambda / (2.0 * mat.mu + mat.lambda);
        const double gamma = (mat.mu_c - mat.mu) / (mat.mu_c + mat.mu);
        const Vec3 q = Q.transpose() * L.M1.at(x1, x2);
        const Vec3 En = nk.E.transpose() * f.n0;
        const double s2 = h * h * w;
        SE -= s2 * (-beta * q.dot(f.n0) * Mat3::Identity() + gamma * f.n0 * q.transpose());
        out.gq_own -= s2 * ((1.0 - beta * nk.E.trace()) * f.n0.cross(q) + gamma * En.cross(q));
    }

    const double we = model.edge_weight[p];
    if (we > 0.0) {
        if (!L.C0.is_zero())
            out.gq_own -= h * we * 2.0 * axl_of_skew_part(Q.transpose() * L.C0.at(x1, x2));
        if (!L.C1.is_zero()) {
            const Mat3 QC = Q.transpose() * L.C1.at(x1, x2);
            const Vec3 cvec = 2.0 * axl_of_skew_part(QC);
            const Vec3 astar = optimal_rotation_rate(nk.k[0], nk.k[1], f, mat).axial();
            const Vec3 z = rate_hessian(f, mat).llt().solve(cvec);
            Mat3 Z = Mat3::Zero();
            Z.col(2) = z;
            SK += 0.5 * h * h * we * d_w_curv_tilde(Z * f.ginv, mat);
            Vec3 ex;
            for (int l = 0; l < 3; ++l)
                ex(l) = astar.dot(2.0 * axl_of_skew_part(-anti(Vec3::Unit(l)) * QC));
            out.gq_own -= h * h * we * ex;
        }
    }

    // membrane: E = Q^T (grad m|0) G - (grad y0|0) G
    Mat3 P = Mat3::Zero();
    P.leftCols<2>() = Q.transpose() * nk.dm;
    P = P * f.ginv;
    out.V = Q * SE * f.ginv.transpose();
    out.gq_own += -2.0 * axl_of_skew_part(SE * P.transpose());

    // curvature: K columns are axl(skew(Q^T d_i Q))
    const Mat3 T = SK * f.ginv.transpose();
    const Stencil3 st[2] = {g.s1(i), g.s2(j)};
    for (int d = 0; d < 2; ++d) {
        const Vec3 t = T.col(d);
        const Mat3 M = Q.transpose() * nk.dQ[d];
        Vec3 own;
        for (int l = 0; l < 3; ++l)
            own(l) = t.dot(axl_of_skew_part(-anti(Vec3::Unit(l)) * M));
        out.gq_own += own;
        for (int k = 0; k < 3; ++k) {
            const size_t q = d == 0 ? g.node(st[d].idx[k], j) : g.node(i, st[d].idx[k]);
            out.gq_nb[d][k] = st[d].w[k] * (skew_rate_map(Q.transpose() * s.Q[q]).transpose() * t);
        }
    }
    return out;
}

}  // namespace

Gradient gradient(const ShellState& s, const ShellModel& model) {
    const ShellGrid& g = model.grid;
    check_state(s, g);
    std::vector<NodeContrib> nc(g.size());
    parallel_rows(g.n2, [&](int j) {
        for (int i = 0; i < g.n1; ++i) nc[g.node(i, j)] = node_contrib(s, model, i, j);
    });

    Gradient G;
    G.gm.assign(g.size(), Vec3::Zero());
    G.gq.assign(g.size(), Vec3::Zero());
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const NodeContrib& c = nc[p];
            G.gm[p] += c.gm_own;
            G.gq[p] += c.gq_own;
            const Stencil3 a = g.s1(i), b = g.s2(j);
            for (int k = 0; k < 3; ++k) {
                const size_t pa = g.node(a.idx[k], j), pb = g.node(i, b.idx[k]);
                G.gm[pa] += a.w[k] * c.V.col(0);
                G.gm[pb] += b.w[k] * c.V.col(1);
                G.gq[pa] += c.gq_nb[0][k];
                G.gq[pb] += c.gq_nb[1][k];
            }
        }
    for (size_t p = 0; p < g.size(); ++p)
        if (g.dirichlet[p]) G.gm[p].setZero();
    return G;
}

}  // namespace cshell
