#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confla/landscape.hpp"

namespace confla {

enum class NKNeighborModel { adjacent, random };

struct NKSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    NKNeighborModel model = NKNeighborModel::adjacent;
    std::uint64_t seed = 0;
};

/// Largest n materialized exhaustively by the generators.
inline constexpr std::size_t kMaxSyntheticBits = 24;

/// The random structure behind an NK landscape: which loci feed each
/// locus's contribution table, and the tables themselves.
struct NKModel {
    std::size_t n = 0;
    std::size_t k = 0;
    /// interacting[i] lists the k loci (besides i) that feed table i.
    std::vector<std::vector<std::size_t>> interacting;
    /// tables[i] has 2^(k+1) entries; bit 0 of the index is locus i, bit j
    /// (j >= 1) is locus interacting[i][j-1].
    std::vector<std::vector<double>> tables;

    /// Fitness of a bit string given as a ConfigId of the binary space.
    double evaluate(ConfigId bits) const;
};

/// Draws the NK structure. Tables are filled with i.i.d. uniform [0,1)
/// values from Rng(seed) (mt19937_64, top 53 bits), locus by locus.
NKModel make_nk_model(const NKSpec& spec);

/// Complete maximize-direction NK landscape over n binary options.
Landscape generate_nk(const NKSpec& spec);

/// f(c) = sum_i w_i c_i over n binary options (maximize). Without explicit
/// weights, distinct weights are drawn uniformly from [0.5, 1.5).
Landscape generate_additive(std::size_t n, const std::optional<std::vector<double>>& weights, std::uint64_t seed);

/// Weights used by generate_additive for a given (n, seed).
std::vector<double> additive_weights(std::size_t n, std::uint64_t seed);

}  // namespace confla
