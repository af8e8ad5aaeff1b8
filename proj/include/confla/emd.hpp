#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "confla/config_space.hpp"

namespace confla {

/// Minimum total cost of a transportation problem with integer supplies,
/// demands (equal totals) and non-negative integer unit costs.
/// cost is row-major, supplies.size() x demands.size().
std::int64_t transport_cost(std::span<const std::int64_t> supplies, std::span<const std::int64_t> demands,
                            std::span<const std::int64_t> cost);

/// Earth mover's distance between uniform distributions on two point sets
/// with the config-space distance as ground metric.
double emd_uniform(const ConfigSpace& space, std::span<const ConfigId> a, std::span<const ConfigId> b);

}  // namespace confla
