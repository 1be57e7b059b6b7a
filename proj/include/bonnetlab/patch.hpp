#pragma once

#include <map>
#include <optional>
#include <string>

#include "bonnetlab/expr.hpp"
#include "bonnetlab/grid.hpp"

namespace bonnetlab {

/// Immersion plus rectangular parameter domain and grid resolution.
/// Resolutions are odd and >= 9 so a center node exists (the base point for
/// the deformation-scalar integration).
struct SurfacePatch {
    ImmersionExpr immersion;
    std::map<std::string, double> parameters;
    double s0 = 0.0, s1 = 1.0, t0 = 0.0, t1 = 1.0;
    int ns = 9, nt = 9;

    GridShape grid_shape() const;

    /// Throws ConfigError on even/small resolutions or an empty domain, and
    /// UnboundName if a referenced parameter is missing from the map.
    void validate() const;
};

/// Named catalog entries: "cylinder", "plane", "graph-quadratic".
/// Throws ConfigError for unknown names.
SurfacePatch catalog_patch(const std::string& name);
bool is_catalog_name(const std::string& name);

/// Evaluate the 2-jet at every grid node. DomainErrors gain node indices.
Grid2D<SurfaceJet> build_grid(const SurfacePatch& patch);

/// Re-extract jets from a discrete grid of positions by finite differences;
/// used to verify reconstructed surfaces through an independent path.
/// order 2: 2nd-order stencils (3-point central first derivatives).
/// order 4: 4th-order first derivatives (the second derivatives stay at the
/// order-2 choice; only the metric check needs the extra accuracy).
Grid2D<SurfaceJet> grid_fd_jets(const Grid2D<LVec3>& x, int order = 2);

} // namespace bonnetlab
