#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cshell/errors.hpp"
#include "cshell/surface.hpp"

namespace cshell {

std::string to_string(PatchKind k) {
    switch (k) {
        case PatchKind::Plate: return "plate";
        case PatchKind::Cylinder: return "cylinder";
        case PatchKind::SphereCap: return "sphere-cap";
        case PatchKind::Graph: return "graph";
        case PatchKind::Tabulated: return "tabulated";
    }
    return "plate";
}

PatchKind patch_kind_from_string(const std::string& s) {
    if (s == "plate") return PatchKind::Plate;
    if (s == "cylinder") return PatchKind::Cylinder;
    if (s == "sphere-cap" || s == "sphere") return PatchKind::SphereCap;
    if (s == "graph") return PatchKind::Graph;
    if (s == "tabulated") return PatchKind::Tabulated;
    throw ConfigError("unknown patch kind '" + s + "'");
}

namespace {

struct Graph2 {
    double g, gx, gy, gxx, gxy, gyy;
};

PatchJet jet_of_graph(double x1, double x2, const Graph2& g) {
    PatchJet j;
    j.y = Vec3(x1, x2, g.g);
    j.dy.col(0) = Vec3(1.0, 0.0, g.gx);
    j.dy.col(1) = Vec3(0.0, 1.0, g.gy);
    j.y11 = Vec3(0.0, 0.0, g.gxx);
    j.y12 = Vec3(0.0, 0.0, g.gxy);
    j.y22 = Vec3(0.0, 0.0, g.gyy);
    return j;
}

// Fourth-order first-derivative weights on a uniform line of n >= 5 samples.
// Returns the stencil offset and weights (already divided by 12) for node i.
void d1_stencil4(int i, int n, int& start, double w[5]) {
    static const double left0[5] = {-25, 48, -36, 16, -3};
    static const double left1[5] = {-3, -10, 18, -6, 1};
    static const double mid[5] = {1, -8, 0, 8, -1};
    const double* src;
    double sgn = 1.0;
    if (i == 0) {
        start = 0;
        src = left0;
    } else if (i == 1) {
        start = 0;
        src = left1;
    } else if (i == n - 1) {
        start = n - 5;
        src = left0;
        sgn = -1.0;
    } else if (i == n - 2) {
        start = n - 5;
        src = left1;
        sgn = -1.0;
    } else {
        start = i - 2;
        src = mid;
    }
    for (int k = 0; k < 5; ++k) {
        // Mirrored closures reverse the stencil and flip the sign.
        const double v = (sgn > 0) ? src[k] : src[4 - k];
        w[k] = sgn * v / 12.0;
    }
}

template <class Get>
Vec3 diff4(int i, int n, double h, Get get) {
    int s;
    double w[5];
    d1_stencil4(i, n, s, w);
    Vec3 acc = Vec3::Zero();
    for (int k = 0; k < 5; ++k) acc += w[k] * get(s + k);
    return acc / h;
}

}  // namespace

struct MidsurfacePatch::TabData {
    int nx = 0, ny = 0;
    Domain dom;
    std::vector<PatchJet> jets;
    const PatchJet& at(int i, int j) const { return jets[static_cast<size_t>(i) * ny + j]; }
};

MidsurfacePatch MidsurfacePatch::plate(const Domain& dom) {
    MidsurfacePatch p;
    p.kind_ = PatchKind::Plate;
    p.dom_ = dom;
    return p;
}

MidsurfacePatch MidsurfacePatch::cylinder(double R, const Domain& dom) {
    if (!(R > 0.0)) throw ConfigError("cylinder radius must be positive");
    MidsurfacePatch p;
    p.kind_ = PatchKind::Cylinder;
    p.dom_ = dom;
    p.radius_ = R;
    return p;
}

MidsurfacePatch MidsurfacePatch::sphere_cap(double R, const Domain& dom) {
    if (!(R > 0.0)) throw ConfigError("sphere radius must be positive");
    const double r2 = std::max(dom.x1min * dom.x1min, dom.x1max * dom.x1max) +
                      std::max(dom.x2min * dom.x2min, dom.x2max * dom.x2max);
    if (r2 >= R * R) throw ConfigError("sphere-cap domain must lie strictly inside the disk of radius R");
    MidsurfacePatch p;
    p.kind_ = PatchKind::SphereCap;
    p.dom_ = dom;
    p.radius_ = R;
    return p;
}

MidsurfacePatch MidsurfacePatch::graph(const GraphPoly& g, const Domain& dom) {
    MidsurfacePatch p;
    p.kind_ = PatchKind::Graph;
    p.dom_ = dom;
    p.poly_ = g;
    return p;
}

MidsurfacePatch MidsurfacePatch::tabulated(const TabulatedGrid& grid) {
    if (grid.nx < 5 || grid.ny < 5) throw ConfigError("tabulated grid needs at least 5x5 samples");
    if (grid.pts.size() != static_cast<size_t>(grid.nx) * grid.ny)
        throw ConfigError("tabulated grid has the wrong number of samples");
    auto data = std::make_shared<TabData>();
    data->nx = grid.nx;
    data->ny = grid.ny;
    data->dom = grid.dom;
    const double hx = (grid.dom.x1max - grid.dom.x1min) / (grid.nx - 1);
    const double hy = (grid.dom.x2max - grid.dom.x2min) / (grid.ny - 1);
    const int nx = grid.nx, ny = grid.ny;
    std::vector<Vec3> y1(nx * ny), y2(nx * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            y1[i * ny + j] = diff4(i, nx, hx, [&](int k) { return grid.at(k, j); });
            y2[i * ny + j] = diff4(j, ny, hy, [&](int k) { return grid.at(i, k); });
        }
    data->jets.resize(nx * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            PatchJet& J = data->jets[i * ny + j];
            J.y = grid.at(i, j);
            J.dy.col(0) = y1[i * ny + j];
            J.dy.col(1) = y2[i * ny + j];
            J.y11 = diff4(i, nx, hx, [&](int k) { return y1[k * ny + j]; });
            J.y22 = diff4(j, ny, hy, [&](int k) { return y2[i * ny + k]; });
            // average both mixed orders to keep y12 symmetric in the discrete sense
            J.y12 = 0.5 * (diff4(j, ny, hy, [&](int k) { return y1[i * ny + k]; }) +
                           diff4(i, nx, hx, [&](int k) { return y2[k * ny + j]; }));
        }
    MidsurfacePatch p;
    p.kind_ = PatchKind::Tabulated;
    p.dom_ = grid.dom;
    p.tab_ = data;
    return p;
}

PatchJet MidsurfacePatch::jet(double x1, double x2) const {
    switch (kind_) {
        case PatchKind::Plate: {
            PatchJet j;
            j.y = Vec3(x1, x2, 0.0);
            j.dy << 1, 0, 0, 1, 0, 0;
            j.y11 = j.y12 = j.y22 = Vec3::Zero();
            return j;
        }
        case PatchKind::Cylinder: {
            const double R = radius_, c = std::cos(x1), s = std::sin(x1);
            PatchJet j;
            j.y = Vec3(R * c, R * s, x2);
            j.dy.col(0) = Vec3(-R * s, R * c, 0.0);
            j.dy.col(1) = Vec3(0.0, 0.0, 1.0);
            j.y11 = Vec3(-R * c, -R * s, 0.0);
            j.y12 = j.y22 = Vec3::Zero();
            return j;
        }
        case PatchKind::SphereCap: {
            const double R2 = radius_ * radius_;
            const double r2 = x1 * x1 + x2 * x2;
            if (r2 >= R2) throw DegenerateSurface("point outside the spherical cap chart");
            const double g = std::sqrt(R2 - r2), g3 = g * g * g;
            return jet_of_graph(x1, x2,
                                {g, -x1 / g, -x2 / g, -1.0 / g - x1 * x1 / g3, -x1 * x2 / g3,
                                 -1.0 / g - x2 * x2 / g3});
        }
        case PatchKind::Graph: {
            const double* c = poly_.c;
            return jet_of_graph(
                x1, x2,
                {c[0] + c[1] * x1 + c[2] * x2 + c[3] * x1 * x1 + c[4] * x1 * x2 + c[5] * x2 * x2,
                 c[1] + 2 * c[3] * x1 + c[4] * x2, c[2] + c[4] * x1 + 2 * c[5] * x2, 2 * c[3], c[4],
                 2 * c[5]});
        }
        case PatchKind::Tabulated: {
            const TabData& t = *tab_;
            const double hx = (t.dom.x1max - t.dom.x1min) / (t.nx - 1);
            const double hy = (t.dom.x2max - t.dom.x2min) / (t.ny - 1);
            const double u = std::clamp((x1 - t.dom.x1min) / hx, 0.0, double(t.nx - 1));
            const double v = std::clamp((x2 - t.dom.x2min) / hy, 0.0, double(t.ny - 1));
            const int i = std::min(static_cast<int>(u), t.nx - 2);
            const int k = std::min(static_cast<int>(v), t.ny - 2);
            const double a = u - i, b = v - k;
            const double w00 = (1 - a) * (1 - b), w10 = a * (1 - b), w01 = (1 - a) * b, w11 = a * b;
            const PatchJet &p00 = t.at(i, k), &p10 = t.at(i + 1, k), &p01 = t.at(i, k + 1),
                           &p11 = t.at(i + 1, k + 1);
            PatchJet j;
            j.y = w00 * p00.y + w10 * p10.y + w01 * p01.y + w11 * p11.y;
            j.dy = w00 * p00.dy + w10 * p10.dy + w01 * p01.dy + w11 * p11.dy;
            j.y11 = w00 * p00.y11 + w10 * p10.y11 + w01 * p01.y11 + w11 * p11.y11;
            j.y12 = w00 * p00.y12 + w10 * p10.y12 + w01 * p01.y12 + w11 * p11.y12;
            j.y22 = w00 * p00.y22 + w10 * p10.y22 + w01 * p01.y22 + w11 * p11.y22;
            return j;
        }
    }
    throw DegenerateSurface("unknown patch kind");
}

TabulatedGrid read_tabulated_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tabulated grid '" + path + "'");
    TabulatedGrid g;
    if (!(in >> g.nx >> g.ny >> g.dom.x1min >> g.dom.x1max >> g.dom.x2min >> g.dom.x2max))
        throw ConfigError("tabulated grid header malformed in '" + path + "'");
    if (g.nx < 5 || g.ny < 5) throw ConfigError("tabulated grid needs at least 5x5 samples");
    g.pts.resize(static_cast<size_t>(g.nx) * g.ny);
    for (auto& p : g.pts)
        if (!(in >> p(0) >> p(1) >> p(2)))
            throw ConfigError("tabulated grid truncated in '" + path + "'");
    return g;
}

}  // namespace cshell
