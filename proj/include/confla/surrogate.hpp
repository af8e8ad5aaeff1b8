#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "confla/landscape.hpp"

namespace confla {

/// Anything that maps a configuration to a predicted fitness.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual double predict(ConfigId id) const = 0;
    /// Ids the model was fitted on (empty when unknown).
    virtual std::span<const ConfigId> training_ids() const { return {}; }
};

/// Seeded uniform split of a landscape's stored ids.
struct HoldoutSplit {
    std::vector<ConfigId> train;  // ascending
    std::vector<ConfigId> test;   // ascending
};

/// Picks round(train_fraction * N) training ids (at least 2); the rest is test.
HoldoutSplit split_holdout(const Landscape& l, double train_fraction, std::uint64_t seed);

struct TreeNode {
    bool leaf = true;
    std::size_t option = 0;
    /// Categorical: left holds configurations whose level equals `level`.
    /// Grid: left holds configurations whose level index is <= `level`.
    bool categorical = true;
    std::size_t level = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    double value = 0.0;  // mean training fitness
    std::uint64_t count = 0;
    std::size_t depth = 0;
};

/// Greedy variance-reduction regression tree over level-indexed features.
///
/// Minimum leaf size 1, no pruning. A non-constant node is split while the
/// depth allows and some option still separates its samples, even when the
/// best split has zero gain. Ties in gain go to the lowest option index,
/// then the lowest level.
class RegressionTree : public Predictor {
public:
    static RegressionTree fit(const Landscape& l, std::span<const ConfigId> train_ids, std::size_t max_depth);

    double predict(ConfigId id) const override;
    std::span<const ConfigId> training_ids() const override { return train_ids_; }

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t max_depth() const noexcept { return max_depth_; }
    std::size_t depth() const;
    std::size_t leaf_count() const;

private:
    RegressionTree(ConfigSpace space, std::size_t max_depth) : space_(std::move(space)), max_depth_(max_depth) {}

    ConfigSpace space_;
    std::size_t max_depth_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<ConfigId> train_ids_;
};

struct TreeFit {
    RegressionTree tree;
    HoldoutSplit split;
    std::uint64_t seed = 0;
};

/// Trains on a seeded sample_fraction of the landscape; the rest is held out.
TreeFit train_tree(const Landscape& l, double sample_fraction, std::size_t max_depth, std::uint64_t seed);

/// R^2 = 1 - SSE/SST of the model on the given ids. Throws when the ids
/// overlap the model's training ids or the holdout fitness is constant.
double evaluate(const Predictor& model, const Landscape& l, std::span<const ConfigId> holdout);
/// R^2 on arbitrary ids, training ids included (in-sample fit).
double r_squared(const Predictor& model, const Landscape& l, std::span<const ConfigId> ids);

/// Fraction of the true best k configurations found among the model's best
/// n by prediction (both ties to the lowest ConfigId).
double top_n_recall(const Predictor& model, const Landscape& l, std::uint64_t k, std::uint64_t n);

/// Product of per-option level indicators.
struct Monomial {
    std::vector<std::pair<std::size_t, std::size_t>> factors;  // (option, level), option ascending
    std::size_t degree() const noexcept { return factors.size(); }
};

struct LassoParams {
    std::size_t degree_cap = 2;
    /// Penalty; negative selects it by k-fold cross-validation.
    double lambda = -1.0;
    std::size_t max_iter = 1000;
    double tol = 1e-7;
    std::uint64_t max_columns = 50000;
    /// Bound on rows * columns of the dense design matrix.
    std::uint64_t max_cells = std::uint64_t{1} << 27;
    /// Row subsample size (0 = every stored configuration).
    std::uint64_t max_rows = 0;
    std::uint64_t seed = 0;
    std::size_t cv_folds = 5;
    std::size_t lambda_grid = 20;
    /// Standardized coefficients with magnitude <= this count as zero.
    double zero_threshold = 1e-8;
};

/// L1-penalized least squares over indicator monomials of degree
/// <= degree_cap. Every level other than level 0 of an option has its own
/// indicator; a monomial takes at most one indicator per option. Each factor
/// is centered by the level's share of the fitted rows, so on a complete
/// landscape monomials over different option sets are orthogonal and an
/// additive landscape leaves every higher-degree coefficient at zero.
class LassoFit : public Predictor {
public:
    double predict(ConfigId id) const override;
    std::span<const ConfigId> training_ids() const override { return rows; }

    ConfigSpace space = ConfigSpace::binary(1);
    std::size_t degree_cap = 0;
    double lambda = 0.0;
    bool lambda_from_cv = false;
    double intercept = 0.0;
    std::vector<Monomial> terms;
    std::vector<double> coefficients;               // centered-product scale
    std::vector<std::vector<double>> level_share;   // [option][level] over rows
    std::vector<double> standardized_coefficients;  // on standardized columns
    std::vector<std::uint64_t> terms_per_degree;    // index d - 1
    std::vector<double> nonzero_fraction_per_degree;
    /// Penalized objective after each sweep.
    std::vector<double> objective_history;
    bool converged = false;
    std::size_t iterations = 0;
    double final_max_change = 0.0;
    double residual_rms = 0.0;
    std::vector<ConfigId> rows;
};

/// Cyclic coordinate descent with soft-thresholding on standardized columns.
/// Stops when the largest coefficient change in a sweep drops below tol or
/// after max_iter sweeps (reported through `converged`).
LassoFit lasso_poly(const Landscape& l, const LassoParams& params);

/// Number of monomial columns lasso_poly would build.
std::uint64_t lasso_column_count(const ConfigSpace& space, std::size_t degree_cap);

/// Predictions loaded from a (ConfigId, prediction) CSV.
class PredictionTable : public Predictor {
public:
    explicit PredictionTable(std::vector<std::pair<ConfigId, double>> entries);
    static PredictionTable load(const std::filesystem::path& path);
    static PredictionTable parse(std::string_view text, const std::string& source = "<memory>");

    double predict(ConfigId id) const override;
    bool has(ConfigId id) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<std::pair<ConfigId, double>>& entries() const noexcept { return entries_; }

private:
    std::vector<std::pair<ConfigId, double>> entries_;  // ascending id
};

/// CSV text with header "config_id,prediction" for every id.
std::string predictions_csv(const Predictor& model, std::span<const ConfigId> ids);

/// Predictions for every stored id of the landscape, ascending id order.
std::vector<double> predict_all(const Predictor& model, const Landscape& l);

}  // namespace confla
