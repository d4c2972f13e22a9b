#include "cshell/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cshell/errors.hpp"

namespace cshell {

namespace {

class Reader {
public:
    explicit Reader(const TomlDoc& d) : doc_(d) {
        static const std::map<std::string, std::set<std::string>> known = {
            {"", {}},
            {"patch", {"kind", "radius", "domain", "coeffs", "file"}},
            {"material", {"mu", "lambda", "mu_c", "Lc", "a1", "a2", "a3"}},
            {"grid", {"n1", "n2", "quadrature", "admissibility_samples"}},
            {"shell", {"h", "prefactor"}},
            {"loads",
             {"N0", "N0_p1", "N0_p2", "M1", "M1_p1", "M1_p2", "C0", "C0_p1", "C0_p2", "C1", "C1_p1",
              "C1_p2", "couple_edges", "include_M1"}},
            {"boundary", {"clamp", "phi_d", "initial", "amplitude", "seed"}},
            {"solver", {"max_iter", "tol", "step_rule", "initial_step", "checkpoint_every"}},
            {"sweep", {"h", "n3"}},
            {"output", {"dir", "golden"}},
            {"debug", {"b3_override"}},
        };
        for (const auto& [t, tab] : doc_) {
            const auto it = known.find(t);
            if (it == known.end()) throw ConfigError("unknown table [" + t + "]");
            for (const auto& [k, v] : tab)
                if (!it->second.count(k)) throw ConfigError("unknown key '" + k + "' in [" + t + "]");
        }
    }

    const TomlValue* find(const std::string& t, const std::string& k) const {
        const auto it = doc_.find(t);
        if (it == doc_.end()) return nullptr;
        const auto jt = it->second.find(k);
        return jt == it->second.end() ? nullptr : &jt->second;
    }

    template <class T>
    void get(const std::string& t, const std::string& k, T& out) const {
        const TomlValue* v = find(t, k);
        if (!v) return;
        if constexpr (std::is_same_v<T, int>) {
            const double* d = std::get_if<double>(v);
            if (!d || std::floor(*d) != *d) throw ConfigError(t + "." + k + " must be an integer");
            out = static_cast<int>(*d);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            const double* d = std::get_if<double>(v);
            if (!d) throw ConfigError(t + "." + k + " must be a number");
            out = *d;
        } else {
            const T* p = std::get_if<T>(v);
            if (!p) throw ConfigError(t + "." + k + " has the wrong type");
            out = *p;
        }
    }

private:
    const TomlDoc& doc_;
};

void need(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

RunConfig config_from_toml(const TomlDoc& doc) {
    Reader r(doc);
    RunConfig c;
    r.get("patch", "kind", c.patch.kind);
    r.get("patch", "radius", c.patch.radius);
    r.get("patch", "domain", c.patch.domain);
    r.get("patch", "coeffs", c.patch.coeffs);
    r.get("patch", "file", c.patch.file);
    auto& m = c.material;
    r.get("material", "mu", m.mu);
    r.get("material", "lambda", m.lambda);
    r.get("material", "mu_c", m.mu_c);
    r.get("material", "Lc", m.Lc);
    r.get("material", "a1", m.a1);
    r.get("material", "a2", m.a2);
    r.get("material", "a3", m.a3);
    r.get("debug", "b3_override", m.b3_override);
    r.get("grid", "n1", c.grid.n1);
    r.get("grid", "n2", c.grid.n2);
    r.get("grid", "quadrature", c.grid.quadrature);
    r.get("grid", "admissibility_samples", c.grid.admissibility_samples);
    r.get("shell", "h", c.h);
    r.get("shell", "prefactor", c.prefactor);
    auto vec = [&](const std::string& name, VecFieldConfig& f) {
        r.get("loads", name, f.value);
        r.get("loads", name + "_p1", f.p1);
        r.get("loads", name + "_p2", f.p2);
        need(f.value.size() == 3, "loads." + name + " needs 3 components");
    };
    auto mat = [&](const std::string& name, MatFieldConfig& f) {
        r.get("loads", name, f.value);
        r.get("loads", name + "_p1", f.p1);
        r.get("loads", name + "_p2", f.p2);
        need(f.value.size() == 9, "loads." + name + " needs 9 components (row-major)");
    };
    vec("N0", c.loads.N0);
    vec("M1", c.loads.M1);
    mat("C0", c.loads.C0);
    mat("C1", c.loads.C1);
    r.get("loads", "couple_edges", c.loads.couple_edges);
    r.get("loads", "include_M1", c.loads.include_M1);
    r.get("boundary", "clamp", c.boundary.clamp);
    r.get("boundary", "phi_d", c.boundary.phi_d);
    r.get("boundary", "initial", c.boundary.initial);
    r.get("boundary", "amplitude", c.boundary.amplitude);
    r.get("boundary", "seed", c.boundary.seed);
    r.get("solver", "max_iter", c.solver.max_iter);
    r.get("solver", "tol", c.solver.tol);
    r.get("solver", "step_rule", c.solver.step_rule);
    r.get("solver", "initial_step", c.solver.initial_step);
    r.get("solver", "checkpoint_every", c.solver.checkpoint_every);
    r.get("sweep", "h", c.sweep.h);
    r.get("sweep", "n3", c.sweep.n3);
    r.get("output", "dir", c.out_dir);
    r.get("output", "golden", c.golden);

    patch_kind_from_string(c.patch.kind);
    need(c.patch.domain.size() == 4, "patch.domain needs [x1min, x1max, x2min, x2max]");
    need(c.patch.coeffs.size() == 6, "patch.coeffs needs 6 entries");
    need(c.patch.kind != "tabulated" || !c.patch.file.empty(), "tabulated patch needs patch.file");
    need(c.grid.n1 >= 3 && c.grid.n2 >= 3, "grid needs n1, n2 >= 3");
    need(c.grid.admissibility_samples >= 2, "grid.admissibility_samples must be >= 2");
    need(c.h > 0.0, "shell.h must be positive");
    need(c.prefactor == "h" || c.prefactor == "one", "shell.prefactor must be \"h\" or \"one\"");
    need(c.solver.max_iter >= 0 && c.solver.tol > 0.0, "solver.max_iter/tol invalid");
    need(c.solver.step_rule == "bb" || c.solver.step_rule == "armijo", "solver.step_rule must be bb or armijo");
    need(c.solver.initial_step > 0.0 && c.solver.checkpoint_every >= 0, "solver step settings invalid");
    need(c.sweep.n3 >= 3 && c.sweep.n3 % 2 == 1, "sweep.n3 must be odd and >= 3");
    for (double h : c.sweep.h) need(h > 0.0, "sweep.h entries must be positive");
    static const std::set<std::string> presets = {"identity", "stretch", "smooth", "perturbed"};
    need(presets.count(c.boundary.initial) == 1, "unknown boundary.initial preset");
    need(c.boundary.phi_d == "initial" || presets.count(c.boundary.phi_d) == 1,
         "unknown boundary.phi_d preset");
    build_material(c);  // material invariants are enforced at parse time
    return c;
}

TomlDoc config_to_toml(const RunConfig& c) {
    TomlDoc d;
    d["patch"] = {{"kind", c.patch.kind}, {"radius", c.patch.radius}, {"domain", c.patch.domain},
                  {"coeffs", c.patch.coeffs}};
    if (!c.patch.file.empty()) d["patch"]["file"] = c.patch.file;
    const auto& m = c.material;
    d["material"] = {{"mu", m.mu}, {"lambda", m.lambda}, {"mu_c", m.mu_c}, {"Lc", m.Lc},
                     {"a1", m.a1},  {"a2", m.a2},         {"a3", m.a3}};
    if (m.b3_override) d["debug"]["b3_override"] = *m.b3_override;
    d["grid"] = {{"n1", double(c.grid.n1)},
                 {"n2", double(c.grid.n2)},
                 {"quadrature", double(c.grid.quadrature)},
                 {"admissibility_samples", double(c.grid.admissibility_samples)}};
    d["shell"] = {{"h", c.h}, {"prefactor", c.prefactor}};
    auto& L = d["loads"];
    auto put = [&](const std::string& n, const std::vector<double>& v, const std::vector<double>& p1,
                   const std::vector<double>& p2) {
        L[n] = v;
        if (!p1.empty()) L[n + "_p1"] = p1;
        if (!p2.empty()) L[n + "_p2"] = p2;
    };
    put("N0", c.loads.N0.value, c.loads.N0.p1, c.loads.N0.p2);
    put("M1", c.loads.M1.value, c.loads.M1.p1, c.loads.M1.p2);
    put("C0", c.loads.C0.value, c.loads.C0.p1, c.loads.C0.p2);
    put("C1", c.loads.C1.value, c.loads.C1.p1, c.loads.C1.p2);
    L["couple_edges"] = c.loads.couple_edges;
    L["include_M1"] = c.loads.include_M1;
    d["boundary"] = {{"clamp", c.boundary.clamp},
                     {"phi_d", c.boundary.phi_d},
                     {"initial", c.boundary.initial},
                     {"amplitude", c.boundary.amplitude},
                     {"seed", double(c.boundary.seed)}};
    d["solver"] = {{"max_iter", double(c.solver.max_iter)},
                   {"tol", c.solver.tol},
                   {"step_rule", c.solver.step_rule},
                   {"initial_step", c.solver.initial_step},
                   {"checkpoint_every", double(c.solver.checkpoint_every)}};
    d["sweep"] = {{"h", c.sweep.h}, {"n3", double(c.sweep.n3)}};
    d["output"] = {{"dir", c.out_dir}};
    if (!c.golden.empty()) d["output"]["golden"] = c.golden;
    return d;
}

RunConfig parse_config(const std::string& text) { return config_from_toml(parse_toml(text)); }

std::string serialize_config(const RunConfig& cfg) { return serialize_toml(config_to_toml(cfg)); }

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

MidsurfacePatch build_patch(const RunConfig& c, const std::string& base_dir) {
    const auto& dv = c.patch.domain;
    const Domain dom{dv[0], dv[1], dv[2], dv[3]};
    switch (patch_kind_from_string(c.patch.kind)) {
        case PatchKind::Plate: return MidsurfacePatch::plate(dom);
        case PatchKind::Cylinder: return MidsurfacePatch::cylinder(c.patch.radius, dom);
        case PatchKind::SphereCap: return MidsurfacePatch::sphere_cap(c.patch.radius, dom);
        case PatchKind::Graph: {
            GraphPoly g;
            for (int k = 0; k < 6; ++k) g.c[k] = c.patch.coeffs[k];
            return MidsurfacePatch::graph(g, dom);
        }
        case PatchKind::Tabulated: {
            std::filesystem::path p(c.patch.file);
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            return MidsurfacePatch::tabulated(read_tabulated_grid(p.string()));
        }
    }
    throw ConfigError("unknown patch kind");
}

MaterialParams build_material(const RunConfig& c) {
    const auto& m = c.material;
    MaterialParams p = MaterialParams::make(m.mu, m.lambda, m.mu_c, m.Lc, m.a1, m.a2, m.a3);
    p.debug_b3_override = m.b3_override;
    return p;
}

LoadSpec build_loads(const RunConfig& c) {
    LoadSpec L;
    auto vf = [](const VecFieldConfig& f) {
        VecField v;
        v.value = Vec3(f.value[0], f.value[1], f.value[2]);
        v.p1 = f.p1;
        v.p2 = f.p2;
        return v;
    };
    auto mf = [](const MatFieldConfig& f) {
        MatField v;
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k) v.value(r, k) = f.value[3 * r + k];
        v.p1 = f.p1;
        v.p2 = f.p2;
        return v;
    };
    L.N0 = vf(c.loads.N0);
    L.M1 = vf(c.loads.M1);
    L.C0 = mf(c.loads.C0);
    L.C1 = mf(c.loads.C1);
    L.couple_edges = c.loads.couple_edges;
    L.include_M1 = c.loads.include_M1;
    return L;
}

ShellModel build_model(const RunConfig& c, const std::string& base_dir) {
    const MidsurfacePatch patch = build_patch(c, base_dir);
    const ShellGrid grid = ShellGrid::make(patch.domain(), c.grid.n1, c.grid.n2, c.boundary.clamp);
    return ShellModel::make(patch, grid, build_material(c), c.h, build_loads(c), c.prefactor == "h");
}

ShellState preset_state(const std::string& name, const ShellModel& model, double a, int seed) {
    ShellState s = identity_state(model.grid, model.patch);
    const ShellGrid& g = model.grid;
    if (name == "identity") return s;
    if (name == "stretch") {
        for (auto& m : s.m) m *= 1.0 + a;
        return s;
    }
    if (name == "smooth") {
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                const double x1 = g.x1(i), x2 = g.x2(j);
                const size_t p = g.node(i, j);
                s.m[p] += a * Vec3(std::sin(x1) * x2, x1 * x1, std::cos(x2) * x1);
                s.Q[p] = exp_so3(Vec3(2.0 * a * Vec3(x1, x2 * x2, x1 * x2))).m();
            }
        return s;
    }
    if (name == "perturbed") {
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::normal_distribution<double> nd(0.0, a > 0.0 ? a : 1e-300);
        for (size_t p = 0; p < s.m.size(); ++p) {
            if (!g.dirichlet[p]) s.m[p] += Vec3(nd(rng), nd(rng), nd(rng));
            s.Q[p] = exp_so3(Vec3(nd(rng), nd(rng), nd(rng))).m();
        }
        return s;
    }
    throw ConfigError("unknown state preset '" + name + "'");
}

ShellState initial_state(const RunConfig& c, const ShellModel& model) {
    ShellState s = preset_state(c.boundary.initial, model, c.boundary.amplitude, c.boundary.seed);
    if (c.boundary.phi_d != "initial") {
        const ShellState d = preset_state(c.boundary.phi_d, model, c.boundary.amplitude, c.boundary.seed);
        for (size_t p = 0; p < s.m.size(); ++p)
            if (model.grid.dirichlet[p]) s.m[p] = d.m[p];
    }
    return s;
}

}  // namespace cshell
