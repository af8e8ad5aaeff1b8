#pragma once

#include <cstdint>
#include <string>

#include "confla/effects.hpp"
#include "confla/landscape.hpp"
#include "confla/metrics.hpp"

namespace confla {

enum class GraphFormat { graphml, dot };

inline constexpr std::uint64_t kDefaultExportGuard = std::uint64_t{1} << 16;

/// Whole-landscape graph: one node per configuration (fitness,
/// isLocalOptimum, basinSize) and one edge per neighbor pair pointing to the
/// fitter end; equal-fitness pairs give one edge marked neutral.
/// Throws ValidationError above size_guard configurations.
std::string export_landscape(const Landscape& l, const BasinAssignment& basins, GraphFormat format,
                             std::uint64_t size_guard = kDefaultExportGuard);

/// LON graph with fitness, basinSize and weighted escape edges.
std::string export_lon(const LocalOptimaNetwork& lon, GraphFormat format);

/// Option interaction network: an edge per pair with significant epistasis,
/// colored by sign.
std::string export_interactions(const ConfigSpace& space, const InteractionMatrix& m);

}  // namespace confla
