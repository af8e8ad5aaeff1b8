#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "confla/landscape.hpp"
#include "confla/metrics.hpp"
#include "confla/surrogate.hpp"

namespace confla {

/// Fitness source for optimizers: the true landscape or a surrogate.
struct FitnessOracle {
    std::string name;
    Objective objective = Objective::maximize;
    std::function<double(ConfigId)> evaluate;
    /// Fitness range used to normalize differences (1 when unknown or zero).
    double scale = 1.0;

    static FitnessOracle from_landscape(const Landscape& l);
    /// Predictions of a model; the scale is the prediction range over the
    /// landscape's stored ids (or over the table entries for a PredictionTable).
    static FitnessOracle from_predictor(const Predictor& model, const Landscape& l, std::string name);
    static FitnessOracle from_table(const PredictionTable& table, Objective objective, std::string name);
};

struct TrajectoryStep {
    std::uint64_t iteration = 0;
    ConfigId id = 0;
    double oracle_fitness = 0.0;
    std::optional<double> true_fitness;
    /// Best true fitness so far (oracle fitness when no truth is available).
    double best_so_far = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::string termination;  // "local_optimum", "plateau", "iterations"
    ConfigId final_id = 0;
    ConfigId best_id = 0;     // best visited by true fitness (oracle when absent)
    std::uint64_t iterations = 0;
    std::uint64_t accepted = 0;
    bool decimated = false;
    std::uint64_t log_every = 1;
    bool normalized = true;
    double scale = 1.0;
    std::string oracle;
};

/// Local search with the same move rule as assign_basins.
Trajectory hill_climb(const Landscape& l, ConfigId start, SearchStrategy strategy, std::uint64_t seed);

enum class InitialConfig { random, given };

struct SAParams {
    double initial_temperature = 1000.0;
    double cooling_rate = 0.99;
    std::uint64_t iterations = 10000;
    std::uint64_t seed = 0;
    InitialConfig initial = InitialConfig::random;
    ConfigId start = 0;  // used when initial == given
    /// Divide |delta| by the oracle's fitness range before the Metropolis test.
    bool normalize = true;
    /// Log every k-th iteration (the first and last are always logged).
    std::uint64_t log_every = 1;
};

/// Simulated annealing with uniform neighbor proposals. A worse proposal is
/// accepted with probability exp(-|delta| / T); T <- alpha * T after every
/// iteration. Equal-fitness proposals are always accepted.
Trajectory simulated_annealing(const FitnessOracle& oracle, const ConfigSpace& space, const SAParams& params,
                               const Landscape* truth = nullptr);

struct WarmStart {
    ConfigId id = 0;
    double source_percentile = 0.0;
    double target_percentile = 0.0;
    std::uint64_t pool = 0;  // size of the source's top-q set
};

/// Seeded uniform pick from the source's top-q set.
WarmStart warm_start_pick(const Landscape& source, const Landscape& target, double q, std::uint64_t seed);

struct BatchSummary {
    std::uint64_t runs = 0;
    stats::DistributionStats final_fitness;
    double coefficient_of_variation = 0.0;  // stdev / |mean| of final true fitness
    double global_hit_rate = 0.0;           // runs ending on a global optimum
};

/// Summary of final true fitness over runs (requires final truth values).
BatchSummary summarize_runs(const std::vector<Trajectory>& runs, const Landscape& truth);

}  // namespace confla
