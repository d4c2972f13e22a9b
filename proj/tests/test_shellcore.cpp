#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cshell/errors.hpp"
#include "cshell/lattice.hpp"
#include "cshell/sampling.hpp"
#include "cshell/shellcore.hpp"

using namespace cshell;

namespace {

const MaterialParams kMat = MaterialParams::make(1.2, 0.8, 0.5, 0.7, 1.0, 0.6, 0.4);

SurfaceFrame plate_frame() { return frame_at(MidsurfacePatch::plate(Domain{}), 0.5, 0.5); }

Mat3 outer(int a, int b) {
    Mat3 X = Mat3::Zero();
    X(a, b) = 1.0;
    return X;
}

double maxabs(const Mat3& X) { return X.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(StrainE, IdentityOnFlatPlate) {
    const SurfaceFrame f = plate_frame();
    EXPECT_EQ(strain_E(f.dy, Mat3::Identity(), f), Mat3::Zero());
}

TEST(StrainE, UniformStretch) {
    const SurfaceFrame f = plate_frame();
    const double e = 0.03;
    const Mat3 E = strain_E((1 + e) * f.dy, Mat3::Identity(), f);
    EXPECT_LE(maxabs(E - e * Vec3(1, 1, 0).asDiagonal().toDenseMatrix()), 1e-16);
}

TEST(StrainE, HasTangentialStructure) {
    std::mt19937 rng(1);
    for (int k = 0; k < 100; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 E = strain_E(random_mat(rng).leftCols<2>(), random_rotation(rng).m(), f);
        EXPECT_LE(maxabs(E * f.A - E), 1e-12);
        EXPECT_NO_THROW(check_structured(E, f));
    }
}

TEST(BendCurv, ConstantRotation) {
    std::mt19937 rng(2);
    const SurfaceFrame f = random_preset_frame(rng);
    const Mat3 Q = random_rotation(rng).m();
    EXPECT_EQ(bendcurv_K(Mat3::Zero(), Mat3::Zero(), Q, f), Mat3::Zero());
}

TEST(BendCurv, DrillSubgroupOnPlate) {
    const SurfaceFrame f = plate_frame();
    const double c = 0.7, x1 = 0.3;
    const Mat3 Q = exp_so3(Vec3(0, 0, c * x1)).m();
    const Mat3 d1Q = Q * anti(Vec3(0, 0, c));  // exact derivative of exp(anti(c x1 e3))
    const Mat3 K = bendcurv_K(d1Q, Mat3::Zero(), Q, f);
    EXPECT_LE(maxabs(K - c * outer(2, 0)), 1e-15);
}

TEST(BendCurv, NormalPartIdentity) {
    std::mt19937 rng(3);
    for (int k = 0; k < 100; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 Q = random_rotation(rng).m();
        const Mat3 K = bendcurv_K(Q * anti(random_vec(rng)), Q * anti(random_vec(rng)), Q, f);
        EXPECT_NEAR(((Mat3::Identity() - f.A) * K).norm(), (K.transpose() * f.n0).norm(), 1e-12);
    }
}

TEST(BendCurv, RejectsNonTangentDerivative) {
    const SurfaceFrame f = plate_frame();
    EXPECT_THROW(bendcurv_K(Mat3::Identity(), Mat3::Zero(), Mat3::Identity(), f), NotATangentDerivative);
}

TEST(Split, FlatPlateExamples) {
    const SurfaceFrame f = plate_frame();
    const Split a = split(outer(2, 0), f);
    EXPECT_EQ(a.par, Mat3::Zero());
    EXPECT_EQ(a.perp, outer(2, 0));
    const Split b = split(outer(0, 0), f);
    EXPECT_EQ(b.par, outer(0, 0));
    EXPECT_EQ(b.perp, Mat3::Zero());
}

TEST(Split, NormalPartIsTraceFree) {
    std::mt19937 rng(4);
    for (int k = 0; k < 100; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Split s = split(random_structured(rng, f), f);
        EXPECT_NEAR(s.perp.trace(), 0.0, 1e-12);
    }
}

TEST(CheckStructured, RejectsNormalColumn) {
    const SurfaceFrame f = plate_frame();
    EXPECT_THROW(check_structured(outer(0, 2), f), StructuralViolation);
    EXPECT_THROW(w_mp_hom(outer(0, 2), f, kMat), StructuralViolation);
}

TEST(WShell, Examples) {
    const MaterialParams& m = kMat;
    EXPECT_EQ(w_shell(Mat3::Zero(), m), 0.0);
    EXPECT_NEAR(w_shell(outer(0, 1), m), m.mu / 2 + m.mu_c / 2, 1e-15);
    const double ref = 3 * m.mu + 9 * m.lambda * m.mu / (m.lambda + 2 * m.mu);
    EXPECT_NEAR(w_shell(Mat3::Identity(), m), ref, 1e-13);
    EXPECT_NEAR(w_shell_dev(Mat3::Identity(), m), ref, 1e-13);
}

TEST(WShell, DevFormAgrees) {
    std::mt19937 rng(5);
    for (int k = 0; k < 200; ++k) {
        const Mat3 X = random_mat(rng);
        EXPECT_NEAR(w_shell(X, kMat), w_shell_dev(X, kMat), 1e-12 * std::max(1.0, w_shell(X, kMat)));
    }
}

TEST(WMpHom, Examples) {
    const SurfaceFrame f = plate_frame();
    const MaterialParams& m = kMat;
    EXPECT_EQ(w_mp_hom(Mat3::Zero(), f, m), 0.0);
    EXPECT_NEAR(w_mp_hom(outer(2, 0), f, m), 2 * m.mu * m.mu_c / (m.mu + m.mu_c), 1e-15);
}

TEST(WCurvHom, Examples) {
    const SurfaceFrame f = plate_frame();
    const MaterialParams& m = kMat;
    EXPECT_EQ(w_curv_hom(Mat3::Zero(), f, m), 0.0);
    const double expect = m.mu * m.Lc * m.Lc * 2 * m.b1() * m.b2() / (m.b1() + m.b2());
    EXPECT_NEAR(w_curv_hom(outer(2, 0), f, m), expect, 1e-15);
}

TEST(WCurvHom, TraceWeightSign) {
    EXPECT_FALSE(curvature_trace_weight_negative(kMat));
    const MaterialParams soft = MaterialParams::make(1, 1, 1, 1, 1.0, 1.0, 0.05);  // b3 = (0.6 - 1)/3
    EXPECT_TRUE(curvature_trace_weight_negative(soft));
}

TEST(Derivatives, MatchCentralDifferences) {
    std::mt19937 rng(6);
    for (int k = 0; k < 20; ++k) {
        const SurfaceFrame f = random_preset_frame(rng);
        const Mat3 X = random_structured(rng, f), D = random_structured(rng, f);
        const double t = 1e-6;
        auto fd = [&](auto fn) { return (fn(X + t * D, f, kMat) - fn(X - t * D, f, kMat)) / (2 * t); };
        const double a = d_w_mp_hom(X, f, kMat).cwiseProduct(D).sum();
        const double b = d_w_curv_hom(X, f, kMat).cwiseProduct(D).sum();
        EXPECT_NEAR(a, fd(w_mp_hom), 1e-6 * std::max(1.0, std::abs(a)));
        EXPECT_NEAR(b, fd(w_curv_hom), 1e-6 * std::max(1.0, std::abs(b)));
    }
}

TEST(DensityJ0, ZeroPlateAndCylinder) {
    std::mt19937 rng(7);
    const SurfaceFrame p = plate_frame();
    EXPECT_EQ(density_J0(Mat3::Zero(), Mat3::Zero(), p, kMat), 0.0);
    const Mat3 E = random_structured(rng, p), K = random_structured(rng, p);
    EXPECT_DOUBLE_EQ(density_J0(E, K, p, kMat), w_mp_hom(E, p, kMat) + w_curv_hom(K, p, kMat));

    const SurfaceFrame c = frame_at(MidsurfacePatch::cylinder(2.0, Domain{}), 0.3, 0.3);
    const double det = (Mat3() << c.dy, c.n0).finished().determinant();
    EXPECT_NEAR(det, 2.0, 1e-14);
    const Mat3 Ec = random_structured(rng, c), Kc = random_structured(rng, c);
    EXPECT_NEAR(density_J0(Ec, Kc, c, kMat), det * (w_mp_hom(Ec, c, kMat) + w_curv_hom(Kc, c, kMat)), 1e-13);
}

TEST(Lattice, DirichletMasks) {
    ShellGrid g = ShellGrid::make(Domain{}, 5, 4, "left,top");
    int count = 0;
    for (char d : g.dirichlet) count += d;
    EXPECT_EQ(count, 4 + 5 - 1);
    EXPECT_TRUE(g.dirichlet[g.node(0, 2)]);
    EXPECT_TRUE(g.dirichlet[g.node(3, 3)]);
    EXPECT_FALSE(g.dirichlet[g.node(3, 1)]);
    EXPECT_THROW(g.set_dirichlet("diagonal"), ConfigError);
    double area = 0.0;
    for (double w : g.weight) area += w;
    EXPECT_NEAR(area, 1.0, 1e-15);
}

TEST(Lattice, IdentityStateIsStrainFreeOnCurvedPatches) {
    const auto cyl = MidsurfacePatch::cylinder(1.5, Domain{0.0, 1.0, 0.0, 1.0});
    const ShellGrid g = ShellGrid::make(cyl.domain(), 7, 6);
    const auto frames = frames_on_lattice(cyl, g.dom, g.n1, g.n2);
    const ShellState s = identity_state(g, cyl);
    EXPECT_EQ(j0_integral(s, g, frames, kMat), 0.0);
}

TEST(Lattice, ConstantStretchIntegratesExactly) {
    const auto plate = MidsurfacePatch::plate(Domain{0.0, 2.0, 0.0, 1.5});
    const ShellGrid g = ShellGrid::make(plate.domain(), 6, 5);
    const auto frames = frames_on_lattice(plate, g.dom, g.n1, g.n2);
    ShellState s = identity_state(g, plate);
    const double e = 0.02;
    for (auto& m : s.m) m *= 1 + e;
    double mem = 0, cur = 0;
    j0_integral(s, g, frames, kMat, &mem, &cur);
    const Mat3 E = e * Vec3(1, 1, 0).asDiagonal().toDenseMatrix();
    EXPECT_NEAR(mem, 3.0 * w_mp_hom(E, frames[0], kMat), 1e-15);
    EXPECT_EQ(cur, 0.0);
}

TEST(Lattice, StateShapeChecked) {
    const ShellGrid g = ShellGrid::make(Domain{}, 4, 4);
    ShellState s = identity_state(g, MidsurfacePatch::plate(Domain{}));
    s.m.pop_back();
    EXPECT_THROW(check_state(s, g), StateIOError);
}
