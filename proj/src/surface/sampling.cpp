#include "cshell/sampling.hpp"

namespace cshell {

Vec3 random_vec(std::mt19937& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    return Vec3(nd(rng), nd(rng), nd(rng));
}

Mat3 random_mat(std::mt19937& rng, double scale) {
    Mat3 X;
    for (int c = 0; c < 3; ++c) X.col(c) = random_vec(rng, scale);
    return X;
}

Rot3 random_rotation(std::mt19937& rng) {
    std::uniform_real_distribution<double> ang(0.0, 3.0);
    Vec3 axis = random_vec(rng);
    axis.normalize();
    return exp_so3(Vec3(ang(rng) * axis));
}

SurfaceFrame random_preset_frame(std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const Domain dom{-0.5, 0.5, -0.5, 0.5};
    const double x1 = u(rng), x2 = u(rng);
    switch (kind(rng)) {
        case 0: return frame_at(MidsurfacePatch::plate(dom), x1, x2);
        case 1: return frame_at(MidsurfacePatch::cylinder(1.0 + u(rng), dom), x1, x2);
        case 2: return frame_at(MidsurfacePatch::sphere_cap(1.5 + u(rng), dom), x1, x2);
        default: {
            GraphPoly g;
            for (double& c : g.c) c = u(rng);
            return frame_at(MidsurfacePatch::graph(g, dom), x1, x2);
        }
    }
}

Mat3 random_structured(std::mt19937& rng, const SurfaceFrame& f, double scale) {
    Mat3 X = random_mat(rng, scale);
    X.col(2).setZero();
    return X * f.ginv;
}

}  // namespace cshell
