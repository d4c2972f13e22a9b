#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "cshell/assemble.hpp"
#include "cshell/errors.hpp"

namespace cshell {

ShellState retract(const ShellState& s, const ShellModel& model, const Gradient& dir, double t) {
    ShellState out = s;
    for (size_t p = 0; p < s.m.size(); ++p) {
        if (!model.grid.dirichlet[p]) out.m[p] += t * dir.gm[p];
        out.Q[p] = s.Q[p] * exp_so3(Vec3(t * dir.gq[p])).m();
    }
    return out;
}

namespace {

Gradient scaled(const Gradient& g, double a) {
    Gradient r = g;
    for (auto& v : r.gm) v *= a;
    for (auto& v : r.gq) v *= a;
    return r;
}

double max_defect(const ShellState& s) {
    double d = 0.0;
    for (const auto& q : s.Q) d = std::max(d, orthogonality_defect(q));
    return d;
}

}  // namespace

MinimizeResult minimize(const ShellState& s0, const ShellModel& model, const MinimizeOptions& opt) {
    MinimizeResult res;
    ShellState s = s0;
    EnergyBreakdown e = total_energy(s, model);
    Gradient g = gradient(s, model);
    res.max_orth_defect = max_defect(s);
    res.log.push_back({0, e, g.inf_norm(), 0.0});

    double alpha = opt.initial_step;
    int since_restart = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        if (g.inf_norm() < opt.tol) {
            res.converged = true;
            break;
        }
        if (opt.restart_every > 0 && (it - 1) % opt.restart_every == 0) {
            alpha = opt.initial_step;
            since_restart = 0;
        }
        const double g2 = g.dot(g);
        const Gradient dir = scaled(g, -1.0);

        ShellState trial;
        EnergyBreakdown et;
        bool accepted = false;
        for (int halving = 0; halving <= 60; ++halving) {
            trial = retract(s, model, dir, alpha);
            double total = std::numeric_limits<double>::infinity();
            try {
                et = total_energy(trial, model);
                total = et.total;
            } catch (const Error&) {
                // a step that leaves the resolvable regime counts as a rejection
            }
            const double decrease = opt.armijo_c * alpha * g2;
            const bool armijo = total <= e.total - decrease;
            // Below round-off the sufficient-decrease test is meaningless; a
            // non-increasing step is still accepted.
            const bool flat = total <= e.total &&
                              decrease <= 64.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1e-300, std::abs(e.total));
            if (armijo || flat) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw LineSearchFailed("Armijo backtracking exhausted 60 halvings");

        if (opt.reorth_every > 0 && ++since_restart % opt.reorth_every == 0) {
            const double drift = max_defect(trial);
            if (drift > 1e-10) throw NotARotation("rotation drift exceeded 1e-10 before reprojection");
            for (auto& q : trial.Q) q = reorthonormalize(q).m();
        }
        res.max_orth_defect = std::max(res.max_orth_defect, max_defect(trial));

        Gradient gn = gradient(trial, model);
        const double step = alpha;
        if (opt.step_rule == "bb") {
            // s = -alpha g, y = gn - g; BB1 step s.s / s.y
            Gradient y = gn;
            for (size_t p = 0; p < y.gm.size(); ++p) {
                y.gm[p] -= g.gm[p];
                y.gq[p] -= g.gq[p];
            }
            const double sy = -alpha * g.dot(y);
            alpha = sy > 0.0 ? alpha * alpha * g2 / sy : 2.0 * alpha;
            alpha = std::clamp(alpha, 1e-12, 1e12);
        } else {
            alpha = std::min(2.0 * alpha, 1e12);
        }
        s = std::move(trial);
        e = et;
        g = std::move(gn);
        res.iterations = it;
        res.log.push_back({it, e, g.inf_norm(), step});
        if (opt.checkpoint && opt.restart_every > 0 && it % opt.restart_every == 0) opt.checkpoint(s, it);
    }
    if (g.inf_norm() < opt.tol) res.converged = true;
    res.state = std::move(s);
    return res;
}

void write_iteration_csv(std::ostream& os, const std::vector<IterRecord>& log) {
    os << "iter,membrane,curvature,load,total,grad_inf_norm,step\n";
    os << std::setprecision(17);
    for (const auto& r : log)
        os << r.iter << ',' << r.energy.membrane << ',' << r.energy.curvature << ','
           << r.energy.load_potential << ',' << r.energy.total << ',' << r.grad_inf << ',' << r.step
           << '\n';
}

void write_state(std::ostream& os, const ShellState& s) {
    os << s.n1 << ' ' << s.n2 << '\n' << std::setprecision(17);
    for (size_t p = 0; p < s.m.size(); ++p) {
        os << s.m[p](0) << ' ' << s.m[p](1) << ' ' << s.m[p](2);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) os << ' ' << s.Q[p](r, c);
        os << '\n';
    }
}

void write_state_file(const std::string& path, const ShellState& s) {
    std::ofstream os(path);
    if (!os) throw OutputError("cannot write state file '" + path + "'");
    write_state(os, s);
    if (!os) throw OutputError("failed while writing '" + path + "'");
}

ShellState read_state(std::istream& is) {
    ShellState s;
    if (!(is >> s.n1 >> s.n2) || s.n1 < 3 || s.n2 < 3) throw StateIOError("bad state header");
    const size_t n = static_cast<size_t>(s.n1) * s.n2;
    s.m.resize(n);
    s.Q.resize(n);
    for (size_t p = 0; p < n; ++p) {
        for (int k = 0; k < 3; ++k)
            if (!(is >> s.m[p](k))) throw StateIOError("state file truncated");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (!(is >> s.Q[p](r, c))) throw StateIOError("state file truncated");
        if (!s.m[p].allFinite() || orthogonality_defect(s.Q[p]) > 1e-9 || s.Q[p].determinant() <= 0.0)
            throw StateIOError("state file holds an invalid rotation");
    }
    std::string extra;
    if (is >> extra) throw StateIOError("trailing data in state file");
    return s;
}

ShellState read_state_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw StateIOError("cannot open state file '" + path + "'");
    return read_state(is);
}

}  // namespace cshell
