#pragma once

#include <optional>
#include <vector>

#include "cshell/rotalg.hpp"
#include "cshell/surface.hpp"

namespace cshell {

struct MaterialParams {
    double mu = 1.0;
    double lambda = 1.0;
    double mu_c = 1.0;
    double Lc = 1.0;
    double a1 = 1.0, a2 = 1.0, a3 = 1.0;
    // Replaces b3 in the b-form only. Used by negative controls in the
    // verification suite; never set in normal runs.
    std::optional<double> debug_b3_override;

    static MaterialParams make(double mu, double lambda, double mu_c, double Lc, double a1,
                               double a2, double a3);  // throws InvalidMaterial
    void validate() const;                              // throws InvalidMaterial

    double kappa() const { return (2.0 * mu + 3.0 * lambda) / 3.0; }
    double b1() const { return a1; }
    double b2() const { return a2; }
    double b3() const { return debug_b3_override ? *debug_b3_override : (12.0 * a3 - a1) / 3.0; }
};

// Quadratic form of the membrane energy evaluated at the strain X = U - I.
double w_mp_form(const Mat3& X, const MaterialParams& mat);
double w_mp(const Mat3& U, const MaterialParams& mat);
// The same energy written with (mu, mu_c, lambda/2) weights.
double w_mp_lame(const Mat3& U, const MaterialParams& mat);

double w_curv_tilde(const Mat3& Gamma, const MaterialParams& mat);
double w_curv_tilde_bform(const Mat3& Gamma, const MaterialParams& mat);
// Frechet derivative of w_curv_tilde; linear in Gamma.
Mat3 d_w_curv_tilde(const Mat3& Gamma, const MaterialParams& mat);

struct CoercivityMargin {
    double lower, value, upper;
    double c_min, c_max;  // extreme eigenvalues of the form restricted to Sym(3)
};
CoercivityMargin coercivity_margin(const Mat3& X, const MaterialParams& mat);

// Fields on omega x [-1/2, 1/2] sampled on an n1 x n2 x n3 grid.
struct ThickFields {
    int n1 = 0, n2 = 0, n3 = 0;
    double h = 0.1;
    Domain dom;
    std::vector<Vec3> phi;
    std::vector<Mat3> Q;

    size_t index(int i, int j, int k) const {
        return (static_cast<size_t>(k) * n2 + j) * n1 + i;
    }
    double dx1() const { return (dom.x1max - dom.x1min) / (n1 - 1); }
    double dx2() const { return (dom.x2max - dom.x2min) / (n2 - 1); }
    double deta() const { return 1.0 / (n3 - 1); }
    double x1(int i) const { return dom.x1min + i * dx1(); }
    double x2(int j) const { return dom.x2min + j * dx2(); }
    double eta3(int k) const { return -0.5 + k * deta(); }
};

// axl(skew(Q^T dQ)) with the skew-projection quality check. The symmetric
// residual of a difference quotient is a truncation error of order spacing^2,
// so `spacing` sets an absolute floor for points where the rate vanishes.
Vec3 rotation_rate(const Mat3& Q, const Mat3& dQ, double spacing = 0.0);  // throws GridTooCoarse

std::vector<SurfaceFrame> frames_on_lattice(const MidsurfacePatch& patch, const Domain& dom,
                                            int n1, int n2);

// Wryness tensor at every sample of the thick grid.
std::vector<Mat3> wryness_field(const ThickFields& f, const std::vector<SurfaceFrame>& frames);
std::vector<Mat3> stretch_field(const ThickFields& f, const std::vector<SurfaceFrame>& frames);

// (1/h) J_h: trapezoid rule in-plane, Simpson rule through the thickness.
double scaled_energy(const ThickFields& f, const MidsurfacePatch& patch, const MaterialParams& mat);

}  // namespace cshell
