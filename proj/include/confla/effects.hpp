#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confla/landscape.hpp"

namespace confla {

/// A unit-distance level change of one option: adjacent grid steps, or any
/// unordered pair of categorical levels (from < to).
struct Transition {
    std::size_t from_level = 0;
    std::size_t to_level = 0;
};

std::vector<Transition> option_transitions(const OptionSpec& option);

struct EffectParams {
    /// Backgrounds per option (or option pair) beyond which a seeded uniform
    /// subsample of this size is used.
    std::uint64_t background_cap = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
    /// Minimum fraction of backgrounds with both endpoints measured
    /// (partial landscapes only).
    double min_coverage = 0.95;
    /// Family-wise significance level; Bonferroni-corrected per family.
    double alpha = 0.05;
    /// Effect-size cutoff on the normalized scale, reported separately from
    /// significance.
    double effect_threshold = 0.05;
    std::size_t histogram_bins = 20;
};

/// Deltas are direction-adjusted (positive = fitter). "Normalized" values
/// are divided by the landscape's fitness range (max - min).
struct MutationEffect {
    std::size_t option = 0;
    std::size_t from_level = 0;
    std::size_t to_level = 0;
    std::uint64_t background_count = 0;  // backgrounds actually evaluated
    std::uint64_t background_total = 0;  // size of the background space
    bool sampled = false;
    double beneficial = 0.0;
    double detrimental = 0.0;
    double neutral = 0.0;
    double mean_delta = 0.0;  // normalized
    double stdev_delta = 0.0;
    double mean_raw_delta = 0.0;
    /// Counts of normalized deltas over histogram_bins equal bins on [-1, 1].
    std::vector<std::uint64_t> histogram;
    /// The raw per-background deltas, normalized, in background order.
    std::vector<double> deltas;
};

std::vector<MutationEffect> mutation_effects(const Landscape& l, std::size_t option, const EffectParams& params = {});

struct OptionImportance {
    std::string name;
    double mean_abs_effect = 0.0;  // normalized
    double mean_effect = 0.0;
    std::uint64_t samples = 0;
    double p_value = 1.0;
    bool significant = false;
    bool above_threshold = false;
};

struct ImportanceVector {
    std::vector<OptionImportance> options;
    double alpha = 0.05;
    double corrected_alpha = 0.05;
    double effect_threshold = 0.05;
    std::string test = "one-sample t-test (two-sided), Bonferroni";

    std::vector<double> values() const;
};

ImportanceVector importance(const Landscape& l, const EffectParams& params = {}, unsigned threads = 1);

/// Normalized epsilon magnitudes at or below this are rounding residue of the
/// four-term sum; they count as zero for sign fractions and the t-test.
inline constexpr double kInteractionNoise = 1e-12;

struct PairInteraction {
    std::size_t i = 0;
    std::size_t j = 0;
    double mean = 0.0;  // normalized epsilon
    double stdev = 0.0;
    double mean_raw = 0.0;
    double positive = 0.0;
    double negative = 0.0;
    double zero = 0.0;
    std::uint64_t samples = 0;
    bool sampled = false;
    double p_value = 1.0;
    bool significant = false;
    /// Sign of the mean epsilon: +1, -1 or 0 (within kInteractionNoise).
    int sign() const noexcept { return mean > kInteractionNoise ? 1 : (mean < -kInteractionNoise ? -1 : 0); }
};

struct InteractionMatrix {
    std::size_t option_count = 0;
    std::vector<PairInteraction> pairs;  // i < j, lexicographic
    double alpha = 0.05;
    double corrected_alpha = 0.05;
    std::string test = "one-sample t-test (two-sided), Bonferroni";

    /// Entry for options a != b in either order.
    const PairInteraction& at(std::size_t a, std::size_t b) const;
    /// Mean epsilons of the upper triangle, row-major, with noise-level means
    /// set to zero.
    std::vector<double> upper_triangle() const;
};

/// Four-point epistasis for every option pair over all backgrounds:
/// eps(b) = f(v,t,b) - f(v,s,b) - f(u,t,b) + f(u,s,b).
InteractionMatrix pairwise_interactions(const Landscape& l, const EffectParams& params = {}, unsigned threads = 1);

/// Lowest per-transition background coverage over all options.
double min_effect_coverage(const Landscape& l);

}  // namespace confla
