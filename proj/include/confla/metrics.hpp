#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "confla/landscape.hpp"
#include "confla/stats.hpp"

namespace confla {

enum class SearchStrategy { best_improvement, first_improvement };

std::string_view to_string(SearchStrategy strategy);

/// One local-search move from `id`.
///
/// best_improvement: the strictly fittest neighbor, ties to the lowest id.
/// first_improvement: neighbors in ascending id order, rotated by an offset
/// derived from (seed, id); the first strictly fitter one is taken.
/// Returns `id` itself when no neighbor is strictly fitter.
ConfigId improving_move(const Landscape& l, ConfigId id, SearchStrategy strategy, std::uint64_t seed);

/// Ids ordered best-first; ties go to the lowest ConfigId.
std::vector<ConfigId> best_first_order(const Landscape& l);
/// The best `count` ids, best-first, ties to the lowest ConfigId.
std::vector<ConfigId> top_ids(const Landscape& l, std::uint64_t count);
/// ceil(q * N) with a tolerance for representation error in q.
std::uint64_t top_count(double q, std::uint64_t n);

/// Fitness distribution summary; with `normalize` values are min-max scaled
/// to [0, 1] first.
stats::DistributionStats fitness_distribution(const Landscape& l, bool normalize);

struct LocalOptimaReport {
    std::vector<ConfigId> optima;  // ascending
    std::uint64_t cardinality = 0;
    double proportion = 0.0;
    /// Configurations with no strictly fitter neighbor but at least one
    /// neighbor of equal fitness (not counted as optima).
    std::uint64_t plateau_count = 0;
};

/// Sink nodes of the fitter-pointing neighbor graph: configurations strictly
/// fitter than every neighbor.
LocalOptimaReport find_local_optima(const Landscape& l, unsigned threads = 1);

struct Basin {
    ConfigId optimum = 0;
    std::uint64_t size = 0;
    double radius = 0.0;  // mean number of search steps to the optimum
};

inline constexpr ConfigId kNoOptimum = std::numeric_limits<ConfigId>::max();

struct BasinAssignment {
    SearchStrategy strategy = SearchStrategy::best_improvement;
    std::uint64_t seed = 0;
    LocalOptimaReport optima;
    std::vector<Basin> basins;  // parallel to optima.optima
    /// Configurations whose search stops on a plateau instead of an optimum.
    std::uint64_t plateau_bucket = 0;
    /// Per id: the optimum reached, or kNoOptimum for the plateau bucket.
    std::vector<ConfigId> attractor;
    /// Per id: number of moves taken.
    std::vector<std::uint32_t> steps;
};

BasinAssignment assign_basins(const Landscape& l, SearchStrategy strategy, std::uint64_t seed, unsigned threads = 1);

struct LonParams {
    std::size_t perturbation_strength = 2;
    std::size_t attempts = 100;
    SearchStrategy strategy = SearchStrategy::best_improvement;
    std::uint64_t seed = 0;
};

struct LonVertex {
    ConfigId id = 0;
    double fitness = 0.0;
    std::uint64_t basin_size = 0;
};

struct LonEdge {
    std::size_t from = 0;  // vertex index
    std::size_t to = 0;
    std::uint64_t weight = 0;
};

struct LocalOptimaNetwork {
    std::vector<LonVertex> vertices;
    std::vector<LonEdge> edges;  // sorted by (from, to)
    LonParams params;
    /// Attempts per vertex whose search ended on a plateau (no edge recorded).
    std::vector<std::uint64_t> lost;
};

/// Escape-edge LON: from every optimum, `attempts` times apply
/// `perturbation_strength` random unit moves, then local search.
LocalOptimaNetwork build_lon(const Landscape& l, const BasinAssignment& basins, const LonParams& params,
                             unsigned threads = 1);
LocalOptimaNetwork build_lon(const Landscape& l, const LonParams& params, unsigned threads = 1);

struct AutocorrelationParams {
    std::size_t walks = 200;
    std::size_t walk_length = 10000;  // steps per walk; a walk visits walk_length + 1 configurations
    std::size_t max_lag = 10;
    std::uint64_t seed = 0;
};

struct AutocorrelationResult {
    AutocorrelationParams params;
    std::vector<double> rho;  // rho[d - 1] for lag d = 1..max_lag
};

/// Pooled Pearson correlation of (f_t, f_{t+d}) along uniform random walks.
AutocorrelationResult autocorrelation(const Landscape& l, const AutocorrelationParams& params, unsigned threads = 1);

struct ProminentRegionReport {
    double q = 0.0;
    std::vector<ConfigId> members;  // best-first
    bool exact_pairs = false;
    stats::DistributionStats member_distances;
    stats::DistributionStats random_distances;
    stats::KsResult ks;
    std::size_t component_count = 0;
};

/// Top-q region: pairwise distances against an equally sized random pair
/// sample (KS test) and connected components of the induced neighbor graph.
ProminentRegionReport prominent_region(const Landscape& l, double q, std::uint64_t pair_sample_cap, std::uint64_t seed);

struct GlobalOptimum {
    ConfigId id = 0;
    double fitness = 0.0;
    std::uint64_t tied = 1;  // configurations sharing the best fitness
};

GlobalOptimum global_optimum(const Landscape& l);

struct DistanceToGlobalReport {
    GlobalOptimum global;
    std::uint64_t optima_count = 0;
    bool sampled = false;
    stats::DistributionStats distances;
};

DistanceToGlobalReport distance_to_global(const Landscape& l, const LocalOptimaReport& optima, std::uint64_t sample_cap,
                                          std::uint64_t seed);

}  // namespace confla
