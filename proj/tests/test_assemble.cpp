#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cshell/assemble.hpp"
#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/reconstruct.hpp"
#include "cshell/sampling.hpp"
#include "cshell/shellcore.hpp"

using namespace cshell;

namespace {

const MaterialParams kMat = MaterialParams::make(1.0, 0.8, 0.6, 0.5, 1.0, 0.8, 0.6);

ShellState smooth_state(const ShellModel& model, double a) {
    const ShellGrid& g = model.grid;
    ShellState s = identity_state(g, model.patch);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const double x1 = g.x1(i), x2 = g.x2(j);
            const size_t p = g.node(i, j);
            if (!g.dirichlet[p]) s.m[p] += a * Vec3(std::sin(2 * x1) * x2, x1 * x1 - x2, std::cos(x2) * x1);
            s.Q[p] = exp_so3(Vec3(a * std::sin(x1 + x2), a * x2 * x2, 0.5 * a * x1)).m();
        }
    return s;
}

Gradient random_direction(std::mt19937& rng, const ShellGrid& g) {
    Gradient d{std::vector<Vec3>(g.size()), std::vector<Vec3>(g.size())};
    for (size_t p = 0; p < g.size(); ++p) {
        d.gm[p] = g.dirichlet[p] ? Vec3::Zero() : random_vec(rng);
        d.gq[p] = random_vec(rng);
    }
    return d;
}

double fd_directional(const ShellState& s, const ShellModel& m, const Gradient& d, double t = 1e-6) {
    return (total_energy(retract(s, m, d, t), m).total - total_energy(retract(s, m, d, -t), m).total) / (2 * t);
}

LoadSpec all_loads() {
    LoadSpec L;
    L.N0.value = Vec3(0.1, -0.2, 0.3);
    L.N0.p1 = {1.0, 0.5};
    L.M1.value = Vec3(0.2, 0.1, -0.1);
    L.M1.p2 = {0.0, 1.0};
    L.include_M1 = true;
    L.C0.value << 0.1, 0.2, 0.0, -0.1, 0.3, 0.2, 0.0, 0.1, -0.2;
    L.C1.value << 0.0, 0.1, 0.2, 0.3, -0.1, 0.0, 0.2, 0.0, 0.1;
    L.C1.p2 = {1.0, -0.5};
    L.couple_edges = "right,top";
    return L;
}

}  // namespace

TEST(Energy, IdentityStateIsFree) {
    for (const auto& patch : {MidsurfacePatch::plate(Domain{}), MidsurfacePatch::cylinder(1.0, Domain{}),
                              MidsurfacePatch::sphere_cap(2.0, Domain{-0.5, 0.5, -0.5, 0.5})}) {
        const ShellModel m = ShellModel::make(patch, ShellGrid::make(patch.domain(), 7, 7), kMat, 0.1);
        const ShellState s = identity_state(m.grid, patch);
        const EnergyBreakdown e = total_energy(s, m);
        EXPECT_EQ(e.membrane, 0.0);
        EXPECT_EQ(e.curvature, 0.0);
        EXPECT_EQ(e.load_potential, 0.0);
        EXPECT_EQ(e.total, 0.0);
        for (double d : energy_density_field(s, m)) EXPECT_EQ(d, 0.0);
    }
}

TEST(Energy, UniformStretchOnPlate) {
    const auto plate = MidsurfacePatch::plate(Domain{0.0, 2.0, 0.0, 1.0});
    const double h = 0.1, e = 0.01;
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 9, 5), kMat, h);
    ShellState s = identity_state(m.grid, plate);
    for (auto& x : s.m) x *= 1 + e;
    const EnergyBreakdown en = total_energy(s, m);
    const Mat3 E = e * Vec3(1, 1, 0).asDiagonal().toDenseMatrix();
    EXPECT_NEAR(en.membrane, h * 2.0 * w_mp_hom(E, m.frames[0], kMat), 1e-16);
    EXPECT_EQ(en.curvature, 0.0);
}

TEST(Energy, QuadratureConvergesAtSecondOrder) {
    const auto cyl = MidsurfacePatch::cylinder(1.0, Domain{0.0, 1.0, 0.0, 1.0});
    std::vector<double> J;
    for (int n : {9, 17, 33, 65}) {
        const ShellModel m = ShellModel::make(cyl, ShellGrid::make(cyl.domain(), n, n), kMat, 0.1, {}, false);
        J.push_back(total_energy(smooth_state(m, 0.2), m).total);
    }
    const double r1 = std::abs(J[0] - J[1]) / std::abs(J[1] - J[2]);
    const double r2 = std::abs(J[1] - J[2]) / std::abs(J[2] - J[3]);
    EXPECT_GE(std::log2(r1), 1.8);
    EXPECT_GE(std::log2(r2), 1.8);
}

TEST(Energy, LoadPotentialExamples) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    const ShellGrid g = ShellGrid::make(plate.domain(), 5, 5);
    {
        const ShellModel m = ShellModel::make(plate, g, kMat, 0.3);
        EXPECT_EQ(load_potential(smooth_state(m, 0.1), m), 0.0);
    }
    {
        LoadSpec L;
        L.N0.value = Vec3::UnitZ();
        const ShellModel m = ShellModel::make(plate, g, kMat, 0.01, L);
        ShellState s = identity_state(g, plate);
        for (auto& x : s.m) x += Vec3::UnitZ();
        EXPECT_NEAR(load_potential(s, m), 0.01, 1e-16);
    }
    {
        // m = y0: only the h^2 moment term survives
        LoadSpec L;
        L.N0.value = Vec3(1, 2, 3);
        L.M1.value = Vec3(0.5, -0.3, 0.2);
        L.include_M1 = true;
        const double h = 0.1;
        const ShellModel m = ShellModel::make(plate, g, kMat, h, L);
        ShellState s = smooth_state(m, 0.2);
        s.m = identity_state(g, plate).m;
        double expect = 0.0;
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                const size_t p = g.node(i, j);
                const NodeKinematics nk = node_kinematics(s, g, m.frames, i, j);
                const Vec3 d = optimal_director(nk.E, s.Q[p], m.frames[p], kMat);
                expect += h * h * g.weight[p] * L.M1.value.dot(d - Vec3::UnitZ());
            }
        EXPECT_NEAR(load_potential(s, m), expect, 1e-15);
        EXPECT_NE(expect, 0.0);
    }
}

TEST(Gradient, VanishesAtIdentity) {
    const auto cyl = MidsurfacePatch::cylinder(1.3, Domain{0.0, 0.8, 0.0, 0.6});
    const ShellModel m = ShellModel::make(cyl, ShellGrid::make(cyl.domain(), 8, 7), kMat, 0.1);
    const Gradient g = gradient(identity_state(m.grid, cyl), m);
    EXPECT_EQ(g.inf_norm(), 0.0);
}

TEST(Gradient, MatchesCentralDifferences) {
    std::mt19937 rng(11);
    const auto patches = {MidsurfacePatch::cylinder(1.0, Domain{0.0, 0.6, 0.0, 0.6}),
                          MidsurfacePatch::sphere_cap(1.5, Domain{-0.4, 0.4, -0.3, 0.3})};
    for (const auto& patch : patches) {
        const ShellModel m = ShellModel::make(patch, ShellGrid::make(patch.domain(), 7, 6, "left"), kMat, 0.1);
        const ShellState s = smooth_state(m, 0.3);
        const Gradient g = gradient(s, m);
        for (int k = 0; k < 20; ++k) {
            const Gradient d = random_direction(rng, m.grid);
            const double an = g.dot(d), fd = fd_directional(s, m, d);
            EXPECT_NEAR(an, fd, 1e-6 * std::max(1e-3, std::abs(fd)));
        }
    }
}

TEST(Gradient, MatchesCentralDifferencesWithAllLoads) {
    std::mt19937 rng(12);
    const auto patch = MidsurfacePatch::cylinder(1.0, Domain{0.0, 0.6, 0.0, 0.6});
    const ShellModel m = ShellModel::make(patch, ShellGrid::make(patch.domain(), 7, 7, "bottom"), kMat, 0.2,
                                          all_loads());
    const ShellState s = smooth_state(m, 0.25);
    const Gradient g = gradient(s, m);
    for (int k = 0; k < 20; ++k) {
        const Gradient d = random_direction(rng, m.grid);
        const double an = g.dot(d), fd = fd_directional(s, m, d);
        EXPECT_NEAR(an, fd, 1e-6 * std::max(1e-3, std::abs(fd)));
    }
}

TEST(Gradient, DeadLoadTermIsExact) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    LoadSpec L;
    L.N0.value = Vec3(0.3, -0.1, 0.7);
    const double h = 0.05;
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 5, 5, "left"), kMat, h, L);
    const Gradient g = gradient(identity_state(m.grid, plate), m);
    for (size_t p = 0; p < m.grid.size(); ++p) {
        const Vec3 expect = m.grid.dirichlet[p] ? Vec3::Zero() : Vec3(-h * m.grid.weight[p] * L.N0.value);
        EXPECT_LE((g.gm[p] - expect).norm(), 1e-18);
        EXPECT_EQ(g.gq[p], Vec3::Zero());
    }
}

TEST(Minimize, IdentityStartTakesNoSteps) {
    const auto cyl = MidsurfacePatch::cylinder(1.0, Domain{});
    const ShellModel m = ShellModel::make(cyl, ShellGrid::make(cyl.domain(), 6, 6), kMat, 0.1);
    const ShellState s0 = identity_state(m.grid, cyl);
    const MinimizeResult r = minimize(s0, m, MinimizeOptions{});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.state.m, s0.m);
    EXPECT_EQ(r.state.Q, s0.Q);
}

TEST(Minimize, ClampedPlateUnderDeadLoad) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    LoadSpec L;
    L.N0.value = Vec3(0, 0, 0.05);
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 9, 9, "all"), kMat, 0.1, L);
    MinimizeOptions opt;
    opt.tol = 1e-8;
    const MinimizeResult r = minimize(identity_state(m.grid, plate), m, opt);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.log.back().grad_inf, 1e-8);
    for (size_t k = 1; k < r.log.size(); ++k) EXPECT_LE(r.log[k].energy.total, r.log[k - 1].energy.total);
    EXPECT_LT(r.log.back().energy.total, 0.0);
    EXPECT_LE(r.max_orth_defect, 1e-12);
}

TEST(Minimize, ArmijoRuleAlsoConverges) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    LoadSpec L;
    L.N0.value = Vec3(0, 0, 0.05);
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 5, 5, "all"), kMat, 0.1, L);
    MinimizeOptions opt;
    opt.step_rule = "armijo";
    opt.tol = 1e-7;
    const MinimizeResult r = minimize(identity_state(m.grid, plate), m, opt);
    EXPECT_TRUE(r.converged);
}

TEST(Minimize, PerturbedIdentityReturnsToRest) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 7, 7, "all"), kMat, 0.1);
    ShellState s = identity_state(m.grid, plate);
    std::mt19937 rng(5);
    std::normal_distribution<double> nd(0.0, 1e-2);
    for (size_t p = 0; p < s.m.size(); ++p) {
        if (m.grid.dirichlet[p]) continue;
        const Vec3 t(nd(rng), nd(rng), 0.0);  // tangent noise on the plate
        s.m[p] += t;
    }
    ASSERT_GT(total_energy(s, m).total, 1e-6);
    const MinimizeResult r = minimize(s, m, MinimizeOptions{});
    EXPECT_LT(std::abs(r.log.back().energy.total), 1e-10);
}

TEST(Minimize, CheckpointResumeContinuesIdentically) {
    const auto plate = MidsurfacePatch::plate(Domain{});
    LoadSpec L;
    L.N0.value = Vec3(0.01, 0, 0.05);
    const ShellModel m = ShellModel::make(plate, ShellGrid::make(plate.domain(), 7, 7, "left"), kMat, 0.1, L);
    MinimizeOptions opt;
    opt.max_iter = 40;
    opt.tol = 1e-14;
    opt.restart_every = 10;
    ShellState at20;
    opt.checkpoint = [&](const ShellState& s, int it) {
        if (it == 20) {
            std::stringstream ss;
            write_state(ss, s);
            at20 = read_state(ss);
        }
    };
    const MinimizeResult full = minimize(identity_state(m.grid, plate), m, opt);
    ASSERT_EQ(full.iterations, 40);
    opt.max_iter = 20;
    opt.checkpoint = nullptr;
    const MinimizeResult resumed = minimize(at20, m, opt);
    EXPECT_EQ(resumed.state.m, full.state.m);
    EXPECT_EQ(resumed.state.Q, full.state.Q);
    for (int k = 0; k <= 20; ++k) EXPECT_EQ(resumed.log[k].energy.total, full.log[20 + k].energy.total);
}

TEST(Determinism, ThreadCountDoesNotChangeBits) {
    const auto cyl = MidsurfacePatch::cylinder(1.0, Domain{0.0, 0.7, 0.0, 0.7});
    const ShellModel m = ShellModel::make(cyl, ShellGrid::make(cyl.domain(), 17, 13, "left"), kMat, 0.1,
                                          all_loads());
    const ShellState s = smooth_state(m, 0.2);
    const int saved = threads();
    set_threads(1);
    const EnergyBreakdown a = total_energy(s, m);
    const Gradient ga = gradient(s, m);
    set_threads(4);
    const EnergyBreakdown b = total_energy(s, m);
    const Gradient gb = gradient(s, m);
    set_threads(saved);
    EXPECT_EQ(a.total, b.total);
    EXPECT_EQ(a.membrane, b.membrane);
    EXPECT_EQ(ga.gm, gb.gm);
    EXPECT_EQ(ga.gq, gb.gq);
}

TEST(StateIO, RoundTripIsExact) {
    const auto cyl = MidsurfacePatch::cylinder(1.0, Domain{});
    const ShellModel m = ShellModel::make(cyl, ShellGrid::make(cyl.domain(), 5, 4), kMat, 0.1);
    const ShellState s = smooth_state(m, 0.3);
    std::stringstream ss;
    write_state(ss, s);
    const ShellState r = read_state(ss);
    EXPECT_EQ(r.n1, 5);
    EXPECT_EQ(r.n2, 4);
    EXPECT_EQ(r.m, s.m);
    EXPECT_EQ(r.Q, s.Q);
}

TEST(StateIO, MalformedInputIsRejected) {
    std::stringstream trunc("3 3\n0 0 0\n");
    EXPECT_THROW(read_state(trunc), StateIOError);
    std::stringstream junk("abc");
    EXPECT_THROW(read_state(junk), StateIOError);

    const auto plate = MidsurfacePatch::plate(Domain{});
    const ShellGrid g = ShellGrid::make(plate.domain(), 3, 3);
    ShellState s = identity_state(g, plate);
    s.Q[4] *= 1.01;  // no longer a rotation
    std::stringstream bad;
    write_state(bad, s);
    EXPECT_THROW(read_state(bad), StateIOError);

    std::stringstream extra;
    write_state(extra, identity_state(g, plate));
    extra << "1.0\n";
    EXPECT_THROW(read_state(extra), StateIOError);

    EXPECT_THROW(read_state_file("/nonexistent/state.txt"), StateIOError);
}

TEST(IterationCsv, Header) {
    std::stringstream ss;
    write_iteration_csv(ss, {{0, EnergyBreakdown{}, 1.0, 0.0}});
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "iter,membrane,curvature,load,total,grad_inf_norm,step");
}
