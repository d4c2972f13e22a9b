#pragma once

namespace cshell::tol {

// Mutable on purpose: tests tighten or loosen these to probe error paths.
inline double algebraic = 1e-12;
inline double decomposition = 1e-10;
inline double structural = 1e-8;
inline double singular_det = 1e-14;

}  // namespace cshell::tol
