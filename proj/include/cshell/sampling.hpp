#pragma once

#include <random>

#include "cshell/surface.hpp"

namespace cshell {

// Random inputs for property sweeps and the verification suite.
Vec3 random_vec(std::mt19937& rng, double scale = 1.0);
Mat3 random_mat(std::mt19937& rng, double scale = 1.0);
Rot3 random_rotation(std::mt19937& rng);
// Frame at a random point of a plate, cylinder, sphere-cap or graph preset.
SurfaceFrame random_preset_frame(std::mt19937& rng);
// (X1 | X2 | 0) [grad Theta(0)]^{-1} with random columns.
Mat3 random_structured(std::mt19937& rng, const SurfaceFrame& f, double scale = 1.0);

}  // namespace cshell
