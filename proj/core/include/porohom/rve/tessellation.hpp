#pragma once

#include "porohom/rve/beam_network.hpp"
#include "porohom/rve/packing.hpp"

namespace porohom::rve {

struct TessellationConfig {
  double collapse_tol = 1e-6;  // relative to domain_edge
  bool default_material = true;
};

/// Periodic Laguerre-Voronoi network of a packing.
///
/// The packing is replicated into its 3x3 neighbourhood, the power diagram is
/// taken as the dual of the regular triangulation (weights r^2) and the cell
/// edges are clipped to the centre square. Edges on the +x / +y faces are
/// images of -x / -y face edges and are dropped.
BeamNetwork tessellate_periodic(const SpherePacking& packing, const TessellationConfig& config = {});

}  // namespace porohom::rve
