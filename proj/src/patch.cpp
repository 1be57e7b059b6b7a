#include "bonnetlab/patch.hpp"

#include <cmath>

namespace bonnetlab {

GridShape SurfacePatch::grid_shape() const {
    GridShape g;
    g.ns = ns;
    g.nt = nt;
    g.s0 = s0;
    g.t0 = t0;
    g.hs = (s1 - s0) / (ns - 1);
    g.ht = (t1 - t0) / (nt - 1);
    return g;
}

void SurfacePatch::validate() const {
    if (ns < 9 || nt < 9) throw ConfigError("resolution must be at least 9x9");
    if (ns % 2 == 0 || nt % 2 == 0) throw ConfigError("resolution must be odd in both axes");
    if (!(s1 > s0) || !(t1 > t0)) throw ConfigError("domain must have positive extent");
    for (const std::string& name : immersion.parameter_names()) {
        auto it = parameters.find(name);
        if (it == parameters.end()) throw UnboundName(name);
        if (!std::isfinite(it->second)) throw ConfigError("parameter '" + name + "' not finite");
    }
}

bool is_catalog_name(const std::string& name) {
    return name == "cylinder" || name == "plane" || name == "graph-quadratic";
}

SurfacePatch catalog_patch(const std::string& name) {
    SurfacePatch p;
    if (name == "cylinder") {
        p.immersion = parse_immersion("(t, r*cos(s), r*sin(s))");
        p.parameters = {{"r", 1.0}};
        p.s0 = 0.0;
        p.s1 = 6.283185307179586;
        p.t0 = -1.0;
        p.t1 = 1.0;
        p.ns = p.nt = 129;
    } else if (name == "plane") {
        p.immersion = parse_immersion("(t, s, 0)");
        p.s0 = p.t0 = -1.0;
        p.s1 = p.t1 = 1.0;
        p.ns = p.nt = 65;
    } else if (name == "graph-quadratic") {
        p.immersion = parse_immersion("(t, s, qs*s^2 + qt*t^2 + qst*s*t)");
        p.parameters = {{"qs", 0.1}, {"qt", 0.05}, {"qst", 0.04}};
        p.s0 = p.t0 = -1.0;
        p.s1 = p.t1 = 1.0;
        p.ns = p.nt = 65;
    } else {
        throw ConfigError("unknown catalog surface '" + name +
                          "' (known: cylinder, plane, graph-quadratic)");
    }
    return p;
}

Grid2D<SurfaceJet> build_grid(const SurfacePatch& patch) {
    const GridShape shape = patch.grid_shape();
    Grid2D<SurfaceJet> out(shape);
    for (int i = 0; i < shape.ns; ++i) {
        for (int j = 0; j < shape.nt; ++j) {
            try {
                out(i, j) = eval_jet(patch.immersion, patch.parameters, shape.s(i), shape.t(j));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " at node (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference jets from discrete position grids
// ---------------------------------------------------------------------------

namespace {

// First derivative along a sampled line, 2nd-order stencils.
LVec3 d1_o2(const LVec3* f, int m, int n, int stride, double h) {
    auto at = [&](int k) -> const LVec3& { return f[k * stride]; };
    if (m == 0) return (at(0) * -3.0 + at(1) * 4.0 - at(2)) * (0.5 / h);
    if (m == n - 1) return (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * (0.5 / h);
    return (at(m + 1) - at(m - 1)) * (0.5 / h);
}

// First derivative, 4th-order stencils (5-point).
LVec3 d1_o4(const LVec3* f, int m, int n, int stride, double h) {
    auto at = [&](int k) -> const LVec3& { return f[k * stride]; };
    const double c = 1.0 / (12.0 * h);
    if (m == 0)
        return (at(0) * -25.0 + at(1) * 48.0 - at(2) * 36.0 + at(3) * 16.0 - at(4) * 3.0) * c;
    if (m == 1)
        return (at(0) * -3.0 - at(1) * 10.0 + at(2) * 18.0 - at(3) * 6.0 + at(4)) * c;
    if (m == n - 1)
        return (at(n - 1) * 25.0 - at(n - 2) * 48.0 + at(n - 3) * 36.0 - at(n - 4) * 16.0 +
                at(n - 5) * 3.0) * c;
    if (m == n - 2)
        return (at(n - 1) * 3.0 + at(n - 2) * 10.0 - at(n - 3) * 18.0 + at(n - 4) * 6.0 -
                at(n - 5)) * c;
    return (at(m - 2) - at(m - 1) * 8.0 + at(m + 1) * 8.0 - at(m + 2)) * c;
}

// Second derivative: central 3-point interior, one-sided 5-point at the ends.
LVec3 d2(const LVec3* f, int m, int n, int stride, double h) {
    auto at = [&](int k) -> const LVec3& { return f[k * stride]; };
    const double c2 = 1.0 / (h * h);
    if (m == 0)
        return (at(0) * 35.0 - at(1) * 104.0 + at(2) * 114.0 - at(3) * 56.0 + at(4) * 11.0) *
               (c2 / 12.0);
    if (m == n - 1)
        return (at(n - 1) * 35.0 - at(n - 2) * 104.0 + at(n - 3) * 114.0 - at(n - 4) * 56.0 +
                at(n - 5) * 11.0) * (c2 / 12.0);
    return (at(m - 1) - at(m) * 2.0 + at(m + 1)) * c2;
}

} // namespace

Grid2D<SurfaceJet> grid_fd_jets(const Grid2D<LVec3>& x, int order) {
    if (order != 2 && order != 4) throw std::logic_error("grid_fd_jets: order must be 2 or 4");
    const GridShape& sh = x.shape();
    if (sh.ns < 5 || sh.nt < 5) throw std::logic_error("grid_fd_jets: grid too small");
    auto d1 = (order == 4) ? d1_o4 : d1_o2;

    Grid2D<SurfaceJet> out(sh);
    Grid2D<LVec3> xs(sh);
    const LVec3* base = x.data().data();
    for (int i = 0; i < sh.ns; ++i) {
        for (int j = 0; j < sh.nt; ++j) {
            const LVec3* col = base + j;    // line along i, stride nt
            const LVec3* row = base + static_cast<std::size_t>(i) * sh.nt; // line along j
            SurfaceJet& jet = out(i, j);
            jet.x = x(i, j);
            jet.xs = d1(col, i, sh.ns, sh.nt, sh.hs);
            jet.xt = d1(row, j, sh.nt, 1, sh.ht);
            jet.xss = d2(col, i, sh.ns, sh.nt, sh.hs);
            jet.xtt = d2(row, j, sh.nt, 1, sh.ht);
            xs(i, j) = jet.xs;
        }
    }
    // Mixed partial: t-derivative of the s-derivative field.
    const LVec3* xsbase = xs.data().data();
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j)
            out(i, j).xst = d1(xsbase + static_cast<std::size_t>(i) * sh.nt, j, sh.nt, 1, sh.ht);
    return out;
}

} // namespace bonnetlab
