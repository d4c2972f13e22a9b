#pragma once

#include <vector>

#include "cshell/cosserat3d.hpp"
#include "cshell/lattice.hpp"
#include "cshell/surface.hpp"

namespace cshell {

struct Reconstruction {
    Vec3 d_star;
    Skew3 A_star;
};

Mat3 biot_stress(const Mat3& U, const MaterialParams& mat);

// Biot-type stretch Q^T (grad m | c) [grad Theta(0)]^{-1}.
Mat3 stretch_with_director(const Mat32& dm, const Vec3& c, const Mat3& Q, const SurfaceFrame& f);

Vec3 optimal_director(const Mat3& E, const Mat3& Q, const SurfaceFrame& f, const MaterialParams& mat);
Skew3 optimal_rotation_rate(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f,
                            const MaterialParams& mat);

// Independent oracles. Multistart Nelder-Mead over c in R^3, and a nested
// grid search over axl(A) in R^3. Both return the minimizer and the value.
struct OracleResult {
    Vec3 arg;
    double value;
};
OracleResult brute_force_director(const Mat32& dm, const Mat3& Q, const SurfaceFrame& f,
                                  const MaterialParams& mat, unsigned seed = 7);
OracleResult brute_force_rotation_rate(const Vec3& k1, const Vec3& k2, const SurfaceFrame& f,
                                       const MaterialParams& mat);

// d* and A* at every node of a lattice state.
std::vector<Reconstruction> reconstruct_state(const ShellState& s, const ShellGrid& g,
                                              const std::vector<SurfaceFrame>& frames,
                                              const MaterialParams& mat);

ThickFields recovery_fields(double h, const ShellState& s, const ShellGrid& g,
                            const std::vector<Reconstruction>& rec, int n3);

struct GammaGap {
    double h;
    double scaled3d;
    double j0;
    double gap;
};
GammaGap gamma_gap(double h, const ShellState& s, const ShellGrid& g, const MidsurfacePatch& patch,
                   const MaterialParams& mat, int n3 = 9);

}  // namespace cshell
