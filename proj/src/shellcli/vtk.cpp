#include <fstream>
#include <iomanip>
#include <ostream>

#include "cshell/commands.hpp"
#include "cshell/errors.hpp"

namespace cshell {

void write_vtk(std::ostream& os, const ShellState& s, const ShellModel& model) {
    const ShellGrid& g = model.grid;
    check_state(s, g);
    const size_t np = g.size();
    const std::vector<double> dens = energy_density_field(s, model);

    os << "# vtk DataFile Version 3.0\n";
    os << "cosserat shell " << g.n1 << "x" << g.n2 << "\n";
    os << "ASCII\nDATASET POLYDATA\n";
    os << std::setprecision(17);
    os << "POINTS " << np << " double\n";
    for (const Vec3& m : s.m) os << m.x() << ' ' << m.y() << ' ' << m.z() << '\n';

    const size_t nq = static_cast<size_t>(g.n1 - 1) * (g.n2 - 1);
    os << "POLYGONS " << nq << ' ' << 5 * nq << '\n';
    for (int j = 0; j + 1 < g.n2; ++j)
        for (int i = 0; i + 1 < g.n1; ++i)
            os << "4 " << g.node(i, j) << ' ' << g.node(i + 1, j) << ' ' << g.node(i + 1, j + 1) << ' '
               << g.node(i, j + 1) << '\n';

    std::vector<double> normE(np), normK(np), trE(np);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const size_t p = g.node(i, j);
            const NodeKinematics nk = node_kinematics(s, g, model.frames, i, j);
            normE[p] = nk.E.norm();
            normK[p] = nk.K.norm();
            trE[p] = nk.E.trace();
        }

    os << "POINT_DATA " << np << '\n';
    for (int c = 0; c < 3; ++c) {
        os << "VECTORS rotation_col" << c + 1 << " double\n";
        for (const Mat3& q : s.Q) os << q(0, c) << ' ' << q(1, c) << ' ' << q(2, c) << '\n';
    }
    auto scalars = [&](const char* name, auto value) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (size_t p = 0; p < np; ++p) os << value(p) << '\n';
    };
    scalars("strain_norm", [&](size_t p) { return normE[p]; });
    scalars("strain_trace", [&](size_t p) { return trE[p]; });
    scalars("bendcurv_norm", [&](size_t p) { return normK[p]; });
    scalars("energy_density", [&](size_t p) { return model.prefactor() * dens[p]; });
    scalars("quad_weight", [&](size_t p) { return g.weight[p]; });
}

void write_vtk_file(const std::string& path, const ShellState& s, const ShellModel& model) {
    std::ofstream f(path);
    if (!f) throw OutputError("cannot open '" + path + "' for writing");
    write_vtk(f, s, model);
    f.flush();
    if (!f) throw OutputError("write to '" + path + "' failed");
}

}  // namespace cshell
