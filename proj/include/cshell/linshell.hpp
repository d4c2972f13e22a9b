#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cshell/assemble.hpp"

namespace cshell {

struct LinearState {
    int n1 = 0, n2 = 0;
    std::vector<Vec3> v;      // midsurface displacement
    std::vector<Vec3> theta;  // infinitesimal microrotation vector
};

Mat3 lin_strain(const Mat32& dv, const Vec3& theta, const SurfaceFrame& f);
Mat3 lin_bendcurv(const Mat32& dtheta, const SurfaceFrame& f);

EnergyBreakdown lin_energy(const LinearState& s, const ShellModel& model);

// Nonlinear state m = y0 + eps v, Q = exp(anti(eps theta)).
ShellState nonlinear_from_linear(const LinearState& s, const ShellModel& model, double eps);

struct SixParamCoeffs {
    double alpha[4];
    double beta[4];
    double mu_c_drill;
};
SixParamCoeffs identify_6param(const MaterialParams& mat, double h);

// Twice the in-plane energy density and twice the curvature density of the
// six-parameter shell written with the identified coefficients.
double two_w_plane_ep(const Mat3& E, const SurfaceFrame& f, const SixParamCoeffs& c);
double two_w_curv_ep(const Mat3& K, const SurfaceFrame& f, const SixParamCoeffs& c);

double algebraic_mean_weight(const MaterialParams& mat);  // (mu + mu_c)/2

// Reduced formula on the identity plate in terms of (R1|R2)^T grad m.
double flat_shell_energy(const MidsurfacePatch& patch, const Mat32& dm, const Mat3& R,
                         const MaterialParams& mat);  // throws NotFlat

struct ComparisonRow {
    std::string quantity;
    double gamma_model;
    double reference;
    bool compared;  // false for blocks only the reference model has
    bool agree;
};
struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    bool all_agree() const;
};

// Neff curvature weights (alpha1, alpha3) are mapped to b1 = alpha1/2, b3 = alpha3/4.
ComparisonReport reissner_mindlin_check(const MaterialParams& mat, double h,
                                        double shear_correction = 5.0 / 6.0, double alpha1 = 1.0,
                                        double alpha3 = 2.0);
void write_report_table(std::ostream& os, const ComparisonReport& r);
void write_report_csv(std::ostream& os, const ComparisonReport& r);

double w_shell_bilinear(const Mat3& X, const Mat3& Y, const MaterialParams& mat);
double w_coss(const Mat3& X, const Mat3& Y, const SurfaceFrame& f, const MaterialParams& mat);

struct IdentityCheck {
    bool pass;
    double max_error;
};
IdentityCheck birsan_identity_check(const MaterialParams& mat, int samples, unsigned seed = 11);

}  // namespace cshell
