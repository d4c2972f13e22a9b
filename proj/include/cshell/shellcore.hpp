#pragma once

#include "cshell/cosserat3d.hpp"
#include "cshell/rotalg.hpp"
#include "cshell/surface.hpp"

namespace cshell {

struct Split {
    Mat3 par;
    Mat3 perp;
};

struct StrainState {
    Mat3 E, K;
    Split Es, Ks;
};

Mat3 strain_E(const Mat32& dm, const Mat3& Q, const SurfaceFrame& f);
Mat3 bendcurv_K(const Mat3& d1Q, const Mat3& d2Q, const Mat3& Q, const SurfaceFrame& f);
Mat3 bendcurv_K_from_rates(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f);
Split split(const Mat3& X, const SurfaceFrame& f);
StrainState strain_state(const Mat3& E, const Mat3& K, const SurfaceFrame& f);

// Throws StructuralViolation unless X = X A_{y0} up to the structural tolerance.
void check_structured(const Mat3& X, const SurfaceFrame& f);

double w_shell(const Mat3& X, const MaterialParams& mat);
double w_shell_dev(const Mat3& X, const MaterialParams& mat);

double shear_weight(const MaterialParams& mat);      // 2 mu mu_c / (mu + mu_c)
double w_mp_hom(const Mat3& E, const SurfaceFrame& f, const MaterialParams& mat);
double w_curv_hom(const Mat3& K, const SurfaceFrame& f, const MaterialParams& mat);
bool curvature_trace_weight_negative(const MaterialParams& mat);

// Derivatives with respect to structured arguments (no structure check).
Mat3 d_w_mp_hom(const Mat3& E, const SurfaceFrame& f, const MaterialParams& mat);
Mat3 d_w_curv_hom(const Mat3& K, const SurfaceFrame& f, const MaterialParams& mat);

double density_J0(const Mat3& E, const Mat3& K, const SurfaceFrame& f, const MaterialParams& mat);

}  // namespace cshell
