#pragma once

namespace cshell {

// Second-order first-derivative stencil on a uniform line of n >= 3 samples:
// central in the interior, one-sided three-point at the two ends.
struct Stencil3 {
    int idx[3];
    double w[3];
};

inline Stencil3 d1_stencil(int i, int n, double h) {
    Stencil3 s;
    if (i == 0) {
        s = {{0, 1, 2}, {-1.5, 2.0, -0.5}};
    } else if (i == n - 1) {
        s = {{n - 3, n - 2, n - 1}, {0.5, -2.0, 1.5}};
    } else {
        s = {{i - 1, i, i + 1}, {-0.5, 0.0, 0.5}};
    }
    for (double& w : s.w) w /= h;
    return s;
}

// Composite trapezoid weight of node i on a line of n samples.
inline double trapezoid_weight(int i, int n, double h) {
    return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

// Composite Simpson weight of node i on a line of odd n >= 3 samples.
inline double simpson_weight(int i, int n, double h) {
    if (i == 0 || i == n - 1) return h / 3.0;
    return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
}

}  // namespace cshell
