#include "cshell/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cshell/errors.hpp"
#include "cshell/parallel.hpp"
#include "cshell/reconstruct.hpp"

namespace fs = std::filesystem;

namespace cshell {

namespace {

std::string config_dir(const CliOptions& opt) {
    const fs::path p = fs::path(opt.config).parent_path();
    return p.empty() ? std::string(".") : p.string();
}

fs::path output_dir(const RunConfig& cfg, const CliOptions& opt) {
    const fs::path dir = opt.out ? fs::path(*opt.out) : fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw OutputError("cannot open '" + p.string() + "' for writing");
    f << std::setprecision(17);
    return f;
}

struct AdmissibilityFailure : Error {
    using Error::Error;
};

void require_admissible(const MidsurfacePatch& patch, double h, const RunConfig& cfg) {
    const int n = cfg.grid.admissibility_samples;
    if (!thickness_admissible(patch, h, n, n)) {
        std::ostringstream ss;
        ss << "thickness h = " << h << " is not admissible: h * max|kappa| = "
           << h * max_abs_curvature(patch, n, n) << " >= 2";
        throw AdmissibilityFailure(ss.str());
    }
}

ShellState state_for(const RunConfig& cfg, const CliOptions& opt, const ShellModel& model) {
    if (!opt.state) return initial_state(cfg, model);
    ShellState s = read_state_file(*opt.state);
    check_state(s, model.grid);
    return s;
}

void print_breakdown(std::ostream& out, const EnergyBreakdown& e) {
    out << std::setprecision(17) << "membrane   " << e.membrane << "\ncurvature  " << e.curvature
        << "\nload       " << e.load_potential << "\ntotal      " << e.total << '\n';
}

}  // namespace

int cmd_geometry(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
    const MidsurfacePatch patch = build_patch(cfg, config_dir(opt));
    const int n = cfg.grid.admissibility_samples;
    const Domain& d = patch.domain();
    const fs::path dir = output_dir(cfg, opt);
    std::ofstream csv = open_out(dir / "geometry.csv");
    csv << "x1,x2,H,K,kappa1,kappa2,det0\n";
    double hmax = 0.0, kmax = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x1 = d.x1min + (d.x1max - d.x1min) * i / (n - 1);
            const double x2 = d.x2min + (d.x2max - d.x2min) * j / (n - 1);
            const SurfaceFrame f = frame_at(patch, x1, x2);
            csv << x1 << ',' << x2 << ',' << f.H << ',' << f.K << ',' << f.kappa1 << ',' << f.kappa2 << ','
                << f.det0 << '\n';
            hmax = std::max(hmax, std::abs(f.H));
            kmax = std::max(kmax, std::abs(f.K));
        }
    const double kap = max_abs_curvature(patch, n, n);
    const bool ok = thickness_admissible(patch, cfg.h, n, n);
    out << "patch " << to_string(patch.kind()) << ", " << n << "x" << n << " samples\n"
        << "max |H| " << hmax << ", max |K| " << kmax << ", max |kappa| " << kap << '\n'
        << "h = " << cfg.h << ": admissible " << (ok ? "true" : "false") << '\n';
    return ok ? kExitOk : kExitAdmissibility;
}

int cmd_energy(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
    const ShellModel model = build_model(cfg, config_dir(opt));
    require_admissible(model.patch, cfg.h, cfg);
    const ShellState s = state_for(cfg, opt, model);
    const EnergyBreakdown e = total_energy(s, model);
    print_breakdown(out, e);
    const fs::path dir = output_dir(cfg, opt);
    std::ofstream csv = open_out(dir / "energy.csv");
    csv << "membrane,curvature,load,total\n"
        << e.membrane << ',' << e.curvature << ',' << e.load_potential << ',' << e.total << '\n';

    if (cfg.golden.empty()) {
        if (opt.bless) throw ConfigError("--bless needs output.golden in the config");
        return kExitOk;
    }
    fs::path golden(cfg.golden);
    if (golden.is_relative()) golden = fs::path(config_dir(opt)) / golden;
    const double vals[4] = {e.membrane, e.curvature, e.load_potential, e.total};
    const char* names[4] = {"membrane", "curvature", "load", "total"};
    if (opt.bless) {
        std::ofstream g = open_out(golden);
        for (int k = 0; k < 4; ++k) g << names[k] << ' ' << vals[k] << '\n';
        if (!g) throw OutputError("write to '" + golden.string() + "' failed");
        out << "golden written to " << golden.string() << '\n';
        return kExitOk;
    }
    std::ifstream g(golden);
    if (!g) throw ConfigError("golden file '" + golden.string() + "' not found (run with --bless)");
    bool match = true;
    for (int k = 0; k < 4; ++k) {
        std::string name;
        double v = 0.0;
        if (!(g >> name >> v) || name != names[k]) throw ConfigError("malformed golden file");
        const double diff = std::abs(v - vals[k]);
        if (diff > 1e-12) {
            out << "golden mismatch in " << names[k] << ": " << vals[k] << " vs " << v << '\n';
            match = false;
        }
    }
    out << "golden " << (match ? "match" : "MISMATCH") << '\n';
    return match ? kExitOk : kExitVerify;
}

int cmd_minimize(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
    const ShellModel model = build_model(cfg, config_dir(opt));
    require_admissible(model.patch, cfg.h, cfg);
    const ShellState s0 = state_for(cfg, opt, model);
    const fs::path dir = output_dir(cfg, opt);

    MinimizeOptions mo;
    mo.max_iter = cfg.solver.max_iter;
    mo.tol = cfg.solver.tol;
    mo.step_rule = cfg.solver.step_rule;
    mo.initial_step = cfg.solver.initial_step;
    if (cfg.solver.checkpoint_every > 0) {
        mo.restart_every = cfg.solver.checkpoint_every;
        mo.checkpoint = [&](const ShellState& s, int it) {
            write_state_file((dir / "checkpoint.txt").string(), s);
            out << "checkpoint at iteration " << it << '\n';
        };
    }
    const MinimizeResult r = minimize(s0, model, mo);
    write_state_file((dir / "state.txt").string(), r.state);
    std::ofstream csv = open_out(dir / "iterations.csv");
    write_iteration_csv(csv, r.log);
    if (!csv) throw OutputError("write to iterations.csv failed");

    out << (r.converged ? "converged" : "not converged") << " after " << r.iterations << " iterations\n"
        << std::setprecision(17) << "final |grad|_inf " << r.log.back().grad_inf << '\n'
        << "max rotation defect " << r.max_orth_defect << '\n';
    print_breakdown(out, r.log.back().energy);
    return kExitOk;
}

int cmd_gamma_sweep(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
    const ShellModel model = build_model(cfg, config_dir(opt));
    for (double h : cfg.sweep.h) require_admissible(model.patch, h, cfg);
    const ShellState s = state_for(cfg, opt, model);
    const fs::path dir = output_dir(cfg, opt);
    std::ofstream csv = open_out(dir / "gamma_sweep.csv");
    csv << "h,scaled3d,j0,gap\n";
    std::vector<double> hs, gaps;
    out << std::setprecision(10);
    for (double h : cfg.sweep.h) {
        const GammaGap g = gamma_gap(h, s, model.grid, model.patch, model.mat, cfg.sweep.n3);
        csv << g.h << ',' << g.scaled3d << ',' << g.j0 << ',' << g.gap << '\n';
        out << "h " << g.h << "  scaled3d " << g.scaled3d << "  j0 " << g.j0 << "  gap " << g.gap << '\n';
        hs.push_back(h);
        gaps.push_back(g.gap);
    }
    const SlopeFit fit = loglog_slope(hs, gaps);
    if (fit.n >= 3)
        out << "log-log slope of |gap| vs h: " << fit.slope << "  95% interval [" << fit.lo << ", " << fit.hi
            << "]\n";
    else
        out << "log-log slope: not enough nonzero gaps\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const CliOptions&, std::ostream& out) {
    const MaterialParams mat = build_material(cfg);
    const auto checks = verification_suite(mat, cfg.h);
    bool ok = true;
    out << std::scientific << std::setprecision(3);
    for (const auto& c : checks) {
        const char* tag = !c.gating ? "INFO" : (c.pass() ? "PASS" : "FAIL");
        out << tag << "  " << std::left << std::setw(64) << c.name << " err " << c.error << "  tol " << c.tol
            << '\n';
        ok = ok && c.pass();
    }
    out << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? kExitOk : kExitVerify;
}

int cmd_export(const RunConfig& cfg, const CliOptions& opt, std::ostream& out) {
    const ShellModel model = build_model(cfg, config_dir(opt));
    require_admissible(model.patch, cfg.h, cfg);
    const ShellState s = state_for(cfg, opt, model);
    const fs::path dir = output_dir(cfg, opt);
    const fs::path file = dir / "shell.vtk";
    write_vtk_file(file.string(), s, model);
    out << "wrote " << file.string() << '\n';
    return kExitOk;
}

int run_cli(const CliOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (opt.threads > 0) set_threads(opt.threads);
        const RunConfig cfg = load_config(opt.config);
        if (opt.command == "geometry") return cmd_geometry(cfg, opt, out);
        if (opt.command == "energy") return cmd_energy(cfg, opt, out);
        if (opt.command == "minimize") return cmd_minimize(cfg, opt, out);
        if (opt.command == "gamma-sweep") return cmd_gamma_sweep(cfg, opt, out);
        if (opt.command == "verify") return cmd_verify(cfg, opt, out);
        if (opt.command == "export") return cmd_export(cfg, opt, out);
        err << "unknown command '" << opt.command << "'\n";
        return kExitConfig;
    } catch (const AdmissibilityFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitAdmissibility;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidMaterial& e) {
        err << "invalid material: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateSurface& e) {
        err << "degenerate surface: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StateIOError& e) {
        err << "state error: " << e.what() << '\n';
        return kExitStateIO;
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitOther;
    }
}

}  // namespace cshell
