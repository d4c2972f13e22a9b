#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cshell/commands.hpp"
#include "cshell/config.hpp"
#include "cshell/errors.hpp"

namespace fs = std::filesystem;
using namespace cshell;

namespace {

const fs::path kData = CSHELL_TEST_DATA;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("cshell_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path write_config(const std::string& name, const std::string& text) const {
        const fs::path p = dir / name;
        std::ofstream(p) << text;
        return p;
    }

    int run(const std::string& cmd, const fs::path& config, std::optional<std::string> state = {},
            bool bless = false) {
        CliOptions o;
        o.command = cmd;
        o.config = config.string();
        o.state = std::move(state);
        o.out = (dir / "out").string();
        o.threads = 1;
        o.bless = bless;
        log.str("");
        errs.str("");
        return run_cli(o, log, errs);
    }

    static std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
        std::ifstream f(p);
        std::string line;
        std::getline(f, line);
        if (header) *header = line;
        std::vector<std::vector<double>> rows;
        while (std::getline(f, line)) {
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(row);
        }
        return rows;
    }

    fs::path dir;
    std::stringstream log, errs;
};

const char* kPlate = R"(
[patch]
kind = "plate"
[grid]
n1 = 7
n2 = 7
[shell]
h = 0.1
)";

const char* kSphere = R"(
[patch]
kind = "sphere"
radius = 1.0
domain = [-0.4, 0.4, -0.4, 0.4]
[grid]
n1 = 9
n2 = 9
[shell]
h = %H%
)";

std::string with_h(std::string s, const std::string& h) { return s.replace(s.find("%H%"), 3, h); }

}  // namespace

TEST(Config, RoundTrip) {
    const RunConfig a = load_config((kData / "plate_deadload.toml").string());
    const RunConfig b = parse_config(serialize_config(a));
    EXPECT_EQ(a, b);
    EXPECT_EQ(serialize_config(a), serialize_config(b));

    RunConfig c;
    c.patch.kind = "graph";
    c.patch.coeffs = {0.1, -0.2, 0.05, 0.0, 0.3, 0.0};
    c.material.b3_override = 0.7;
    c.loads.N0.p1 = {0.0, 1.0, 2.0};
    c.loads.C1.value[4] = 0.25;
    c.loads.couple_edges = "right";
    c.boundary.initial = "perturbed";
    c.solver.step_rule = "armijo";
    c.sweep.h = {0.3, 0.15};
    EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("[grid]\nn1 = 9\nwidth = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("[grid]\nn1 = 9.5\n"), ConfigError);
    EXPECT_THROW(parse_config("[mesh]\nn1 = 9\n"), ConfigError);
    EXPECT_THROW(parse_config("[patch]\nkind = \"torus\"\n"), ConfigError);
    EXPECT_THROW(parse_config("[solver]\nstep_rule = \"newton\"\n"), ConfigError);
    EXPECT_THROW(parse_config("[material]\nmu_c = 0.0\n"), InvalidMaterial);
    EXPECT_THROW(parse_config("[sweep]\nn3 = 4\n"), ConfigError);
}

TEST_F(Cli, NonPositiveCouplingModulusExitsTwo) {
    const auto cfg = write_config("bad.toml", std::string(kPlate) + "[material]\nmu_c = -1.0\n");
    EXPECT_EQ(run("verify", cfg), kExitConfig);
    EXPECT_EQ(run("energy", cfg), kExitConfig);
}

TEST_F(Cli, MissingConfigExitsTwo) { EXPECT_EQ(run("geometry", dir / "nope.toml"), kExitConfig); }

TEST_F(Cli, GeometryPlateIsFlat) {
    ASSERT_EQ(run("geometry", write_config("p.toml", kPlate)), kExitOk);
    std::string header;
    const auto rows = read_csv(dir / "out" / "geometry.csv", &header);
    EXPECT_EQ(header, "x1,x2,H,K,kappa1,kappa2,det0");
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) {
        EXPECT_EQ(r[2], 0.0);
        EXPECT_EQ(r[3], 0.0);
    }
    EXPECT_NE(log.str().find("admissible true"), std::string::npos);
}

TEST_F(Cli, GeometrySphereAdmissibility) {
    EXPECT_EQ(run("geometry", write_config("s1.toml", with_h(kSphere, "0.1"))), kExitOk);
    EXPECT_NE(log.str().find("admissible true"), std::string::npos);
    const auto rows = read_csv(dir / "out" / "geometry.csv");
    for (const auto& r : rows) {
        EXPECT_NEAR(std::abs(r[2]), 1.0, 1e-6);
        EXPECT_NEAR(r[3], 1.0, 1e-6);
    }
    EXPECT_EQ(run("geometry", write_config("s2.toml", with_h(kSphere, "2.5"))), kExitAdmissibility);
    EXPECT_NE(log.str().find("admissible false"), std::string::npos);
    EXPECT_EQ(run("energy", dir / "s2.toml"), kExitAdmissibility);
}

TEST_F(Cli, EnergyIdentityIsZero) {
    ASSERT_EQ(run("energy", write_config("p.toml", kPlate)), kExitOk);
    const auto rows = read_csv(dir / "out" / "energy.csv");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][3], 0.0);
}

TEST_F(Cli, EnergyRejectsBadStates) {
    const auto cfg = write_config("p.toml", kPlate);
    const RunConfig rc = parse_config(kPlate);
    RunConfig other = rc;
    other.grid.n1 = 5;
    const ShellModel m = build_model(other);
    write_state_file((dir / "small.txt").string(), initial_state(other, m));
    EXPECT_EQ(run("energy", cfg, (dir / "small.txt").string()), kExitStateIO);
    std::ofstream(dir / "junk.txt") << "not a state\n";
    EXPECT_EQ(run("energy", cfg, (dir / "junk.txt").string()), kExitStateIO);
    EXPECT_EQ(run("energy", cfg, (dir / "missing.txt").string()), kExitStateIO);
}

TEST_F(Cli, EnergyMatchesGolden) {
    EXPECT_EQ(run("energy", kData / "cylinder_stretch.toml"), kExitOk);
    EXPECT_NE(log.str().find("golden match"), std::string::npos);
    EXPECT_GT(read_csv(dir / "out" / "energy.csv")[0][3], 0.0);
}

TEST_F(Cli, GoldenMismatchAndBless) {
    // A copy of the fixture with a stale golden value
    std::ifstream src(kData / "cylinder_stretch.toml");
    std::stringstream text;
    text << src.rdbuf();
    const auto cfg = write_config("cyl.toml", text.str());
    std::ofstream(dir / "cylinder_stretch.golden") << "membrane 1\ncurvature 0\nload 0\ntotal 1\n";
    EXPECT_EQ(run("energy", cfg), kExitVerify);
    EXPECT_EQ(run("energy", cfg, {}, true), kExitOk);
    EXPECT_EQ(run("energy", cfg), kExitOk);
    EXPECT_EQ(run("energy", write_config("p.toml", kPlate), {}, true), kExitConfig);
}

TEST_F(Cli, MinimizeIdentityTakesNoSteps) {
    const auto cfg = write_config("p.toml", std::string(kPlate) + "[boundary]\nclamp = \"left\"\n");
    ASSERT_EQ(run("minimize", cfg), kExitOk);
    EXPECT_NE(log.str().find("after 0 iterations"), std::string::npos);
    const RunConfig rc = load_config(cfg.string());
    const ShellModel m = build_model(rc);
    const ShellState a = initial_state(rc, m), b = read_state_file((dir / "out" / "state.txt").string());
    EXPECT_EQ(a.m, b.m);
    for (size_t k = 0; k < a.Q.size(); ++k) EXPECT_EQ(a.Q[k], b.Q[k]);
}

TEST_F(Cli, MinimizeDeadLoad) {
    ASSERT_EQ(run("minimize", kData / "plate_deadload.toml"), kExitOk) << errs.str();
    EXPECT_NE(log.str().find("converged after"), std::string::npos);
    std::string header;
    const auto rows = read_csv(dir / "out" / "iterations.csv", &header);
    ASSERT_GT(rows.size(), 2u);
    const auto cols = std::count(header.begin(), header.end(), ',') + 1;
    std::vector<std::string> names;
    std::stringstream hs(header);
    for (std::string c; std::getline(hs, c, ',');) names.push_back(c);
    ASSERT_EQ(static_cast<long>(names.size()), cols);
    const auto it_total = std::find(names.begin(), names.end(), "total");
    const auto it_grad = std::find(names.begin(), names.end(), "grad_inf_norm");
    ASSERT_NE(it_total, names.end());
    ASSERT_NE(it_grad, names.end());
    const size_t ct = it_total - names.begin(), cg = it_grad - names.begin();
    for (size_t k = 1; k < rows.size(); ++k) EXPECT_LE(rows[k][ct], rows[k - 1][ct]);
    EXPECT_LT(rows.back()[cg], 1e-8);
    EXPECT_LT(rows.back()[ct], 0.0);
}

TEST_F(Cli, MinimizeResumesFromCheckpoint) {
    std::ifstream src(kData / "plate_deadload.toml");
    std::stringstream base;
    base << src.rdbuf();
    std::string text = base.str();
    text.replace(text.find("max_iter = 20000"), 16, "max_iter = %N%\ncheckpoint_every = 10");
    auto cfg_with = [&](const std::string& name, const std::string& n) {
        std::string t = text;
        return write_config(name, t.replace(t.find("%N%"), 3, n));
    };

    ASSERT_EQ(run("minimize", cfg_with("full.toml", "20000")), kExitOk);
    fs::rename(dir / "out" / "state.txt", dir / "full_state.txt");
    ASSERT_EQ(run("minimize", cfg_with("part.toml", "20")), kExitOk);
    EXPECT_NE(log.str().find("checkpoint at iteration 20"), std::string::npos);
    fs::rename(dir / "out" / "checkpoint.txt", dir / "ckpt.txt");
    ASSERT_EQ(run("minimize", dir / "full.toml", (dir / "ckpt.txt").string()), kExitOk);

    const ShellState a = read_state_file((dir / "full_state.txt").string());
    const ShellState b = read_state_file((dir / "out" / "state.txt").string());
    EXPECT_EQ(a.m, b.m);
    for (size_t k = 0; k < a.Q.size(); ++k) EXPECT_EQ(a.Q[k], b.Q[k]);
}

TEST_F(Cli, GammaSweepFlatIdentity) {
    const auto cfg = write_config("p.toml", std::string(kPlate) + "[sweep]\nh = [0.2, 0.1, 0.05]\nn3 = 5\n");
    ASSERT_EQ(run("gamma-sweep", cfg), kExitOk);
    std::string header;
    const auto rows = read_csv(dir / "out" / "gamma_sweep.csv", &header);
    EXPECT_EQ(header, "h,scaled3d,j0,gap");
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) EXPECT_LE(std::abs(r[3]), 1e-10);
}

TEST_F(Cli, GammaSweepInadmissibleThickness) {
    const auto cfg = write_config("s.toml", with_h(kSphere, "0.1") + "[sweep]\nh = [0.5, 2.5]\n");
    EXPECT_EQ(run("gamma-sweep", cfg), kExitAdmissibility);
}

TEST_F(Cli, VerifyDefaultPasses) {
    EXPECT_EQ(run("verify", write_config("p.toml", kPlate)), kExitOk) << log.str();
    EXPECT_NE(log.str().find("all checks passed"), std::string::npos);
    EXPECT_EQ(log.str().find("FAIL "), std::string::npos);
}

TEST_F(Cli, VerifyCorruptedB3Fails) {
    const auto cfg = write_config("p.toml", std::string(kPlate) + "[debug]\nb3_override = 0.37\n");
    EXPECT_EQ(run("verify", cfg), kExitVerify);
    EXPECT_NE(log.str().find("FAIL"), std::string::npos);
}

TEST(Verify, SlopeFit) {
    const std::vector<double> x = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const SlopeFit f = loglog_slope(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.lo, 2.0, 1e-9);
    EXPECT_NEAR(f.hi, 2.0, 1e-9);
}

TEST_F(Cli, ExportIdentityPlate) {
    ASSERT_EQ(run("export", write_config("p.toml", kPlate)), kExitOk);
    std::ifstream f(dir / "out" / "shell.vtk");
    std::string line;
    std::getline(f, line);
    EXPECT_EQ(line, "# vtk DataFile Version 3.0");
    std::getline(f, line);  // title
    std::getline(f, line);
    EXPECT_EQ(line, "ASCII");
    std::getline(f, line);
    EXPECT_EQ(line, "DATASET POLYDATA");
    std::string kw, type;
    int n = 0;
    f >> kw >> n >> type;
    EXPECT_EQ(kw, "POINTS");
    EXPECT_EQ(n, 49);
    for (int k = 0; k < n; ++k) {
        double x, y, z;
        f >> x >> y >> z;
        EXPECT_EQ(z, 0.0);
    }
    int nq = 0, size = 0;
    f >> kw >> nq >> size;
    EXPECT_EQ(kw, "POLYGONS");
    EXPECT_EQ(nq, 36);
    EXPECT_EQ(size, 5 * 36);
    for (int k = 0; k < nq; ++k) {
        int c, a, b, d, e;
        f >> c >> a >> b >> d >> e;
        EXPECT_EQ(c, 4);
        for (int v : {a, b, d, e}) {
            EXPECT_GE(v, 0);
            EXPECT_LT(v, n);
        }
    }
    f >> kw >> n;
    EXPECT_EQ(kw, "POINT_DATA");
    EXPECT_TRUE(f.good());
}

namespace {

// Reads a named SCALARS block from a legacy VTK file.
std::vector<double> vtk_scalars(const fs::path& p, const std::string& name) {
    std::ifstream f(p);
    std::string line;
    int n = 0;
    while (std::getline(f, line)) {
        if (line.rfind("POINT_DATA", 0) == 0) n = std::stoi(line.substr(11));
        if (line.rfind("SCALARS " + name + " ", 0) == 0) {
            std::getline(f, line);  // LOOKUP_TABLE
            std::vector<double> v(n);
            for (double& x : v) f >> x;
            return v;
        }
    }
    return {};
}

}  // namespace

TEST_F(Cli, ExportDensityIntegratesToEnergy) {
    const auto cfg = write_config("c.toml", R"(
[patch]
kind = "cylinder"
radius = 1.5
domain = [0.0, 0.8, 0.0, 0.8]
[grid]
n1 = 13
n2 = 11
[shell]
h = 0.1
[boundary]
initial = "smooth"
amplitude = 0.1
)");
    ASSERT_EQ(run("export", cfg), kExitOk);
    const auto rho = vtk_scalars(dir / "out" / "shell.vtk", "energy_density");
    const auto w = vtk_scalars(dir / "out" / "shell.vtk", "quad_weight");
    ASSERT_EQ(rho.size(), 143u);
    ASSERT_EQ(w.size(), 143u);
    double sum = 0;
    for (size_t k = 0; k < rho.size(); ++k) sum += rho[k] * w[k];

    ASSERT_EQ(run("energy", cfg), kExitOk);
    const auto e = read_csv(dir / "out" / "energy.csv")[0];
    EXPECT_NEAR(sum, e[0] + e[1], 1e-10 * std::max(1.0, e[0] + e[1]));
    EXPECT_GT(sum, 0.0);
}

TEST_F(Cli, ExportUnwritablePathExitsFive) {
    const auto cfg = write_config("p.toml", kPlate);
    std::ofstream(dir / "blocker") << "x";
    CliOptions o;
    o.command = "export";
    o.config = cfg.string();
    o.out = (dir / "blocker" / "sub").string();
    EXPECT_EQ(run_cli(o, log, errs), kExitOutput);
}

TEST_F(Cli, ThreadCountDoesNotChangeEnergy) {
    const auto cfg = kData / "cylinder_stretch.toml";
    CliOptions o;
    o.command = "energy";
    o.config = cfg.string();
    o.out = (dir / "a").string();
    o.threads = 1;
    ASSERT_EQ(run_cli(o, log, errs), kExitOk);
    o.out = (dir / "b").string();
    o.threads = 3;
    ASSERT_EQ(run_cli(o, log, errs), kExitOk);
    std::ifstream a(dir / "a" / "energy.csv"), b(dir / "b" / "energy.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
}
