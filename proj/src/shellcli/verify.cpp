#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "cshell/commands.hpp"
#include "cshell/linshell.hpp"
#include "cshell/reconstruct.hpp"
#include "cshell/sampling.hpp"
#include "cshell/shellcore.hpp"

namespace cshell {

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (size_t k = 0; k < x.size() && k < y.size(); ++k)
        if (x[k] > 0.0 && y[k] != 0.0 && std::isfinite(y[k])) {
            lx.push_back(std::log(x[k]));
            ly.push_back(std::log(std::abs(y[k])));
        }
    SlopeFit fit;
    fit.n = static_cast<int>(lx.size());
    if (fit.n < 2) return fit;
    const double n = fit.n;
    double mx = 0.0, my = 0.0;
    for (int k = 0; k < fit.n; ++k) {
        mx += lx[k] / n;
        my += ly[k] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int k = 0; k < fit.n; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    fit.slope = sxy / sxx;
    fit.lo = fit.hi = fit.slope;
    if (fit.n > 2) {
        double sse = 0.0;
        for (int k = 0; k < fit.n; ++k) {
            const double r = ly[k] - (my + fit.slope * (lx[k] - mx));
            sse += r * r;
        }
        const double se = std::sqrt(sse / (n - 2.0) / sxx);
        const boost::math::students_t dist(n - 2.0);
        const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
        fit.lo = fit.slope - t * se;
        fit.hi = fit.slope + t * se;
    }
    return fit;
}

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Series sum of A^k / k! up to k = 19.
Mat3 exp_series(const Mat3& A) {
    Mat3 term = Mat3::Identity(), sum = Mat3::Identity();
    for (int k = 1; k < 20; ++k) {
        term = term * A / k;
        sum += term;
    }
    return sum;
}

Mat32 random_dm(std::mt19937& rng, const Mat3& Q, const SurfaceFrame& f) {
    return Q * f.dy + 0.3 * random_mat(rng).leftCols<2>();
}

}  // namespace

std::vector<OracleCheck> verification_suite(const MaterialParams& mat, double h, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<OracleCheck> out;
    auto add = [&](std::string name, double err, double tol, bool gating = true) {
        out.push_back({std::move(name), err, tol, gating});
    };

    // rotation algebra
    double nye = 0, axl2 = 0, cartan = 0, polar = 0, expo = 0;
    for (int k = 0; k < 200; ++k) {
        const Mat3 G = random_mat(rng);
        nye = std::max(nye, (nye_alpha_to_gamma(nye_gamma_to_alpha(G)) - G).cwiseAbs().maxCoeff());
        // |w| <= 1.5 keeps the truncation of the 20-term series below 1e-13
        const Vec3 w = random_vec(rng).normalized() * (1.5 * std::uniform_real_distribution<double>()(rng));
        const Mat3 A = anti(w);
        axl2 = std::max(axl2, rel(frob2(A), 2.0 * axl(A).squaredNorm()));
        const Cartan c = cartan_split(G);
        const Mat3 S = c.skew.matrix(), T = c.trace / 3.0 * Mat3::Identity();
        cartan = std::max({cartan, std::abs((c.dev_sym.cwiseProduct(S)).sum()),
                           std::abs((c.dev_sym.cwiseProduct(T)).sum()),
                           std::abs((S.cwiseProduct(T)).sum()),
                           (c.dev_sym + S + T - G).cwiseAbs().maxCoeff()});
        const Mat3 F = random_rotation(rng).m() * (Mat3::Identity() + 0.4 * sym(random_mat(rng)));
        if (F.determinant() > 1e-3) {
            const Polar p = polar_decompose(F);
            Eigen::SelfAdjointEigenSolver<Mat3> es(F.transpose() * F);
            const Mat3 U = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                           es.eigenvectors().transpose();
            const Mat3 R = F * U.inverse();
            polar = std::max({polar, (p.U - U).cwiseAbs().maxCoeff(), (p.R.m() - R).cwiseAbs().maxCoeff()});
        }
        expo = std::max(expo, (exp_so3(w).m() - exp_series(A)).cwiseAbs().maxCoeff());
    }
    add("nye roundtrip", nye, 1e-14);
    add("|A|^2 = 2|axl A|^2", axl2, 1e-14);
    add("cartan orthogonality", cartan, 1e-13);
    add("polar vs eigen oracle", polar, 1e-9);
    add("exp_so3 vs series", expo, 1e-12);

    // two-form equivalences
    double mp_forms = 0, curv_forms = 0;
    for (int k = 0; k < 200; ++k) {
        const Mat3 U = Mat3::Identity() + 0.5 * random_mat(rng);
        mp_forms = std::max(mp_forms, rel(w_mp(U, mat), w_mp_lame(U, mat)));
        const Mat3 G = random_mat(rng);
        curv_forms = std::max(curv_forms, rel(w_curv_tilde(G, mat), w_curv_tilde_bform(G, mat)));
    }
    add("membrane dev-form = lambda-form", mp_forms, 1e-12);
    add("curvature a-form = b-form", curv_forms, 1e-12);

    // homogenization against brute force
    double dbf = 0, dcf = 0, stat = 0, abf = 0, acf = 0;
    for (int k = 0; k < 40; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 Q = random_rotation(rng).m();
        const Mat32 dm = random_dm(rng, Q, f);
        const Mat3 E = strain_E(dm, Q, f);
        const double hom = w_mp_hom(E, f, mat);
        dbf = std::max(dbf, std::abs(brute_force_director(dm, Q, f, mat).value - hom));
        const Mat3 U = stretch_with_director(dm, optimal_director(E, Q, f, mat), Q, f);
        dcf = std::max(dcf, std::abs(w_mp(U, mat) - hom));
        stat = std::max(stat, (biot_stress(U, mat) * f.n0).norm());

        const Vec3 k1 = random_vec(rng), k2 = random_vec(rng);
        const Mat3 K = bendcurv_K_from_rates(k1, k2, f);
        const double chom = w_curv_hom(K, f, mat);
        abf = std::max(abf, std::abs(brute_force_rotation_rate(k1, k2, f, mat).value - chom));
        Mat3 X;
        X << k1, k2, axl(optimal_rotation_rate(k1, k2, f, mat));
        acf = std::max(acf, std::abs(w_curv_tilde(X * f.ginv, mat) - chom));
    }
    add("membrane hom vs brute-force director", dbf, 1e-8);
    add("membrane hom at closed-form director", dcf, 1e-12);
    add("normal Biot traction at optimum", stat, 1e-9);
    add("curvature hom vs brute-force rotation rate", abf, 1e-8);
    add("curvature hom at SPD-solve rate", acf, 1e-12);

    // coefficient identification
    const SixParamCoeffs c = identify_6param(mat, h);
    const double L2 = mat.mu * mat.Lc * mat.Lc, b1 = mat.b1(), b2 = mat.b2(), b3 = mat.b3();
    const double ref[9] = {2 * h * mat.mu * mat.lambda / (2 * mat.mu + mat.lambda),
                           h * (mat.mu - mat.mu_c),
                           h * (mat.mu + mat.mu_c),
                           2 * h * mat.mu * mat.mu_c / (mat.mu + mat.mu_c),
                           2 * L2 * b1 * b3 / (b1 + b3),
                           L2 * b1,
                           L2 * (b1 + b2),
                           4 * L2 * b1 * b2 / (b1 + b2),
                           2 * h * mat.mu_c};
    const double got[9] = {c.alpha[0], c.alpha[1], c.alpha[2], c.alpha[3], c.beta[0],
                           c.beta[1],  c.beta[2],  c.beta[3],  c.mu_c_drill};
    double coeff = 0;
    for (int k = 0; k < 9; ++k) coeff = std::max(coeff, std::abs(got[k] - ref[k]) / std::max(1e-300, std::abs(ref[k])));
    add("six-parameter coefficients", coeff, 1e-14);

    double plane_tan = 0, plane_full = 0;
    for (int k = 0; k < 200; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 E = random_structured(rng, f);
        const Mat3 Et = f.A * E;
        plane_tan = std::max(plane_tan, rel(2 * h * w_mp_hom(Et, f, mat), two_w_plane_ep(Et, f, c)));
        plane_full = std::max(plane_full, rel(2 * h * w_mp_hom(E, f, mat), two_w_plane_ep(E, f, c)));
    }
    add("in-plane quadratic form, tangential strains", plane_tan, 1e-12);
    add("in-plane quadratic form, with transverse shear (informational)", plane_full, 1e-12, false);

    const IdentityCheck bi = birsan_identity_check(mat, 500, seed + 1);
    add("W_mp_hom = W_Coss", bi.max_error, 1e-12);

    // flat-shell reduction
    {
        const MidsurfacePatch plate = MidsurfacePatch::plate(Domain{});
        const SurfaceFrame f = frame_at(plate, 0.5, 0.5);
        double flat = 0;
        for (int k = 0; k < 100; ++k) {
            const Mat3 Q = random_rotation(rng).m();
            const Mat32 dm = random_dm(rng, Q, f);
            flat = std::max(flat, rel(w_mp_hom(strain_E(dm, Q, f), f, mat), flat_shell_energy(plate, dm, Q, mat)));
        }
        add("flat-shell reduction", flat, 1e-12);
    }

    // Taylor orders on a small cylinder lattice
    {
        const MidsurfacePatch cyl = MidsurfacePatch::cylinder(2.0, Domain{0.0, 0.6, 0.0, 0.6});
        const ShellGrid g = ShellGrid::make(cyl.domain(), 9, 9, "left");
        const ShellModel model = ShellModel::make(cyl, g, mat, h, {}, false);

        LinearState ls{g.n1, g.n2, std::vector<Vec3>(g.size()), std::vector<Vec3>(g.size())};
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                const double x1 = g.x1(i), x2 = g.x2(j);
                ls.v[g.node(i, j)] = Vec3(std::sin(x1 + x2), x1 * x2, std::cos(2 * x1));
                ls.theta[g.node(i, j)] = Vec3(x2, 0.5 * x1 * x1, std::sin(x2));
            }
        const double q = lin_energy(ls, model).total;
        std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3}, diff;
        for (double e : eps)
            diff.push_back(total_energy(nonlinear_from_linear(ls, model, e), model).total - e * e * q);
        const SlopeFit fit = loglog_slope(eps, diff);
        add("linearization remainder slope (target 3)", std::abs(fit.slope - 3.0), 0.3);

        ShellState s = nonlinear_from_linear(ls, model, 0.2);
        const Gradient gr = gradient(s, model);
        double worst = 0;
        for (int k = 0; k < 5; ++k) {
            Gradient dir{std::vector<Vec3>(g.size()), std::vector<Vec3>(g.size())};
            for (size_t p = 0; p < g.size(); ++p) {
                dir.gm[p] = g.dirichlet[p] ? Vec3::Zero() : random_vec(rng);
                dir.gq[p] = random_vec(rng);
            }
            const double t = 1e-6;
            const double fd = (total_energy(retract(s, model, dir, t), model).total -
                               total_energy(retract(s, model, dir, -t), model).total) /
                              (2 * t);
            const double an = gr.dot(dir);
            worst = std::max(worst, std::abs(fd - an) / std::max(1e-8, std::abs(an)));
        }
        add("analytic gradient vs central differences", worst, 1e-6);
    }
    return out;
}

}  // namespace cshell
