#pragma once

// Brute-force reference implementations used only by tests. They re-derive
// the encoding and neighborhoods from the level counts so that they share no
// code with the library under test.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "confla/landscape.hpp"
#include "confla/random.hpp"

namespace oracle {

using confla::ConfigId;

struct Shape {
    std::vector<std::size_t> levels;
    std::vector<bool> grid;
    bool maximize = true;

    explicit Shape(const confla::ConfigSpace& space);
    std::uint64_t size() const;
    ConfigId encode(const std::vector<std::size_t>& cfg) const;
    std::vector<std::size_t> decode(ConfigId id) const;
    std::vector<ConfigId> neighbors(ConfigId id) const;
    std::uint64_t distance(ConfigId a, ConfigId b) const;
};

/// Larger is fitter.
double oriented(const confla::Landscape& l, ConfigId id);

std::vector<ConfigId> local_optima(const confla::Landscape& l);
std::uint64_t plateau_count(const confla::Landscape& l);

struct BasinResult {
    std::vector<ConfigId> attractor;  // kNone for plateau outcomes
    std::vector<std::uint32_t> steps;
};
inline constexpr ConfigId kNone = ~ConfigId{0};

/// Best-improvement path following, ties to the lowest id (recursive, memoized).
BasinResult best_improvement_basins(const confla::Landscape& l);

/// Normalized deltas of option `k` for transition from -> to, ascending by
/// the id of the `from` configuration.
std::vector<double> mutation_deltas(const confla::Landscape& l, std::size_t k, std::size_t from, std::size_t to);

/// All transitions of an option, in the library's documented order.
std::vector<std::pair<std::size_t, std::size_t>> transitions(const Shape& s, std::size_t k);

/// Normalized epsilon values of pair (i, j) over every transition pair and
/// background, in arbitrary order.
std::vector<double> interaction_values(const confla::Landscape& l, std::size_t i, std::size_t j);

double fitness_range(const confla::Landscape& l);

/// Naive long-double mean.
double mean(const std::vector<double>& x);

/// Spearman via explicit average ranks and a direct covariance formula.
double spearman(const std::vector<double>& x, const std::vector<double>& y);
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Exact lag-1 autocorrelation of a stationary uniform random walk:
/// 1 - E[(f(x) - f(y))^2] / (2 Var f) over uniformly chosen neighbor pairs.
double exact_lag1_autocorrelation(const confla::Landscape& l);

/// Dense two-phase simplex for min c.x s.t. A x = b, x >= 0 (b >= 0).
/// Returns the optimal objective.
double simplex_min(std::vector<std::vector<long double>> a, std::vector<long double> b, std::vector<long double> c);

/// EMD between uniform distributions via the transportation LP.
double lp_emd(const Shape& s, const std::vector<ConfigId>& a, const std::vector<ConfigId>& b);

/// Random mixed categorical/grid space with cardinality <= max_cardinality.
confla::ConfigSpace random_space(confla::Rng& rng, std::uint64_t max_cardinality);

/// Random complete landscape; with `ties` fitness values come from a small
/// integer set so plateaus occur.
confla::Landscape random_landscape(const confla::ConfigSpace& space, confla::Rng& rng, bool ties);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace oracle
