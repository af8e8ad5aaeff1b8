#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "confla/effects.hpp"
#include "confla/landscape.hpp"
#include "confla/metrics.hpp"

namespace confla {

/// Throws ValidationError unless both landscapes share an identical space.
void require_same_space(const Landscape& a, const Landscape& b);

struct FitnessCorrelation {
    double pearson = 0.0;
    double spearman = 0.0;
    std::uint64_t support = 0;       // configurations compared
    bool common_support = false;     // true when restricted to shared ids
};

/// Correlations of raw fitness aligned by ConfigId. Incomplete inputs are
/// compared on the ids present in both.
FitnessCorrelation fitness_correlation(const Landscape& a, const Landscape& b);

/// Ordinal best-first ranks per ConfigId (ties to the lowest id).
std::vector<std::uint64_t> ordinal_ranks(const Landscape& l);
/// Per ConfigId: fraction of configurations strictly fitter.
std::vector<double> percentiles(const Landscape& l);

struct TopRegionOverlap {
    double q = 0.0;
    std::uint64_t size = 0;
    double jaccard = 0.0;
    /// mean |rank_a(c) - rank_b(c)| / N over c in Top_q(a) (resp. Top_q(b)).
    double shake_up_ab = 0.0;
    double shake_up_ba = 0.0;
    /// mean |percentile_a(c) - percentile_b(c)| over Top_q(a) (resp. Top_q(b)).
    double percentile_shift_ab = 0.0;
    double percentile_shift_ba = 0.0;
};

TopRegionOverlap top_region_overlap(const Landscape& a, const Landscape& b, double q);

struct OptimaSimilarity {
    double jaccard = 0.0;
    double emd = 0.0;
    bool approximate = false;  // EMD computed on subsamples
    std::uint64_t count_a = 0;
    std::uint64_t count_b = 0;
    std::uint64_t used_a = 0;
    std::uint64_t used_b = 0;
};

inline constexpr std::uint64_t kDefaultEmdCap = 512;

/// Jaccard of the two optima sets and EMD between uniform distributions on
/// them; sets larger than sample_cap are reduced to a seeded subsample.
OptimaSimilarity local_optima_similarity(const ConfigSpace& space, std::span<const ConfigId> optima_a,
                                         std::span<const ConfigId> optima_b, std::uint64_t sample_cap,
                                         std::uint64_t seed);

struct GlobalOptimumShift {
    ConfigId optimum_a = 0;
    ConfigId optimum_b = 0;
    std::uint64_t distance = 0;
    /// Percentile of a's optimum evaluated in b (fraction strictly fitter).
    double rank_shift_ab = 0.0;
    double rank_shift_ba = 0.0;
    /// Ordinal rank of a's optimum in b, divided by N.
    double ordinal_shift_ab = 0.0;
    double ordinal_shift_ba = 0.0;
};

GlobalOptimumShift global_optimum_shift(const Landscape& a, const Landscape& b);

struct Consistency {
    double importance_spearman = 0.0;
    std::optional<double> interaction_spearman;  // absent with fewer than 2 pairs
};

double importance_consistency(const ImportanceVector& a, const ImportanceVector& b);
double interaction_consistency(const InteractionMatrix& a, const InteractionMatrix& b);
Consistency consistency(const ImportanceVector& ia, const ImportanceVector& ib, const InteractionMatrix& xa,
                        const InteractionMatrix& xb);

struct ComparisonParams {
    double q = 0.1;
    std::uint64_t emd_cap = kDefaultEmdCap;
    std::uint64_t seed = 0;
    EffectParams effects;
    bool with_consistency = true;
    unsigned threads = 1;
};

struct ComparisonReport {
    FitnessCorrelation correlation;
    TopRegionOverlap top;
    OptimaSimilarity optima;
    GlobalOptimumShift global;
    std::optional<Consistency> consistency;
};

/// Full pairwise comparison of two complete landscapes.
ComparisonReport compare_landscapes(const Landscape& a, const Landscape& b, const ComparisonParams& params);

}  // namespace confla
