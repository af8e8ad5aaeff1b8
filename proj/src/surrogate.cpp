#include "confla/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "confla/error.hpp"
#include "confla/metrics.hpp"
#include "confla/numeric_text.hpp"
#include "confla/random.hpp"
#include "confla/stats.hpp"

namespace confla {

HoldoutSplit split_holdout(const Landscape& l, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw ValidationError("training fraction must be in (0, 1], got " + format_double(train_fraction));
    }
    const auto ids = l.ids();
    const auto n = static_cast<std::uint64_t>(ids.size());
    const auto count = static_cast<std::uint64_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (count < 2) {
        throw ValidationError("training sample is empty or too small (" + std::to_string(count) + " of " +
                              std::to_string(n) + " configurations; need at least 2)");
    }
    Rng rng(seed);
    const auto picked = sample_without_replacement(n, count, rng);
    HoldoutSplit out;
    out.train.reserve(picked.size());
    out.test.reserve(n - picked.size());
    std::size_t p = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (p < picked.size() && picked[p] == i) {
            out.train.push_back(ids[i]);
            ++p;
        } else {
            out.test.push_back(ids[i]);
        }
    }
    return out;
}

RegressionTree RegressionTree::fit(const Landscape& l, std::span<const ConfigId> train_ids, std::size_t max_depth) {
    if (train_ids.empty()) throw ValidationError("training sample is empty");
    const auto& space = l.space();
    RegressionTree tree(space, max_depth);
    tree.train_ids_.assign(train_ids.begin(), train_ids.end());
    std::sort(tree.train_ids_.begin(), tree.train_ids_.end());
    if (std::adjacent_find(tree.train_ids_.begin(), tree.train_ids_.end()) != tree.train_ids_.end()) {
        throw ValidationError("training ids contain duplicates");
    }

    const std::size_t n = tree.train_ids_.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = l.fitness(tree.train_ids_[i]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    struct Pending {
        std::size_t node, lo, hi;
    };
    std::vector<Pending> stack;
    tree.nodes_.push_back(TreeNode{});
    stack.push_back({0, 0, n});
    std::vector<double> sums;
    std::vector<std::uint64_t> counts;
    std::vector<double> vals;

    while (!stack.empty()) {
        const Pending job = stack.back();
        stack.pop_back();
        const std::size_t m = job.hi - job.lo;
        vals.resize(m);
        for (std::size_t i = 0; i < m; ++i) vals[i] = y[order[job.lo + i]];
        const double mean = stats::mean(vals);
        {
            auto& node = tree.nodes_[job.node];
            node.value = mean;
            node.count = m;
        }
        const std::size_t depth = tree.nodes_[job.node].depth;
        const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
        if (depth >= max_depth || m <= 1 || constant) continue;

        double best_gain = -1.0;
        std::size_t best_option = 0, best_level = 0;
        for (std::size_t k = 0; k < space.option_count(); ++k) {
            const std::size_t levels = space.level_count(k);
            sums.assign(levels, 0.0);
            counts.assign(levels, 0);
            for (std::size_t i = 0; i < m; ++i) {
                const auto lv = space.level_of(tree.train_ids_[order[job.lo + i]], k);
                sums[lv] += vals[i] - mean;
                ++counts[lv];
            }
            // With centered values the SSE reduction of a two-way split is
            // s_left^2 * m / (c_left * c_right).
            auto consider = [&](double s, std::uint64_t c, std::size_t level) {
                if (c == 0 || c == m) return;
                const double gain = s * s * static_cast<double>(m) /
                                    (static_cast<double>(c) * static_cast<double>(m - c));
                if (gain > best_gain) {
                    best_gain = gain;
                    best_option = k;
                    best_level = level;
                }
            };
            if (space.option(k).kind == OptionKind::categorical) {
                for (std::size_t v = 0; v < levels; ++v) consider(sums[v], counts[v], v);
            } else {
                double s = 0.0;
                std::uint64_t c = 0;
                for (std::size_t t = 0; t + 1 < levels; ++t) {
                    s += sums[t];
                    c += counts[t];
                    consider(s, c, t);
                }
            }
        }
        if (best_gain < 0.0) continue;  // no option separates the samples

        const bool categorical = space.option(best_option).kind == OptionKind::categorical;
        auto goes_left = [&](std::size_t idx) {
            const auto lv = space.level_of(tree.train_ids_[idx], best_option);
            return categorical ? lv == best_level : lv <= best_level;
        };
        const auto mid_it = std::stable_partition(order.begin() + static_cast<std::ptrdiff_t>(job.lo),
                                                  order.begin() + static_cast<std::ptrdiff_t>(job.hi), goes_left);
        const auto mid = static_cast<std::size_t>(mid_it - order.begin());

        const std::size_t left = tree.nodes_.size();
        tree.nodes_.push_back(TreeNode{});
        tree.nodes_.push_back(TreeNode{});
        tree.nodes_[left].depth = depth + 1;
        tree.nodes_[left + 1].depth = depth + 1;
        auto& node = tree.nodes_[job.node];
        node.leaf = false;
        node.option = best_option;
        node.categorical = categorical;
        node.level = best_level;
        node.left = left;
        node.right = left + 1;
        stack.push_back({left + 1, mid, job.hi});
        stack.push_back({left, job.lo, mid});
    }
    return tree;
}

double RegressionTree::predict(ConfigId id) const {
    std::size_t i = 0;
    while (!nodes_[i].leaf) {
        const auto& node = nodes_[i];
        const auto lv = space_.level_of(id, node.option);
        const bool left = node.categorical ? lv == node.level : lv <= node.level;
        i = left ? node.left : node.right;
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::depth() const {
    std::size_t d = 0;
    for (const auto& node : nodes_) d = std::max(d, node.depth);
    return d;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf; }));
}

TreeFit train_tree(const Landscape& l, double sample_fraction, std::size_t max_depth, std::uint64_t seed) {
    auto split = split_holdout(l, sample_fraction, seed);
    auto tree = RegressionTree::fit(l, split.train, max_depth);
    return TreeFit{std::move(tree), std::move(split), seed};
}

double evaluate(const Predictor& model, const Landscape& l, std::span<const ConfigId> holdout) {
    if (holdout.empty()) throw ValidationError("holdout set is empty");
    const auto trained = model.training_ids();
    if (!trained.empty()) {
        std::vector<ConfigId> train(trained.begin(), trained.end());
        std::sort(train.begin(), train.end());
        for (const auto id : holdout) {
            if (std::binary_search(train.begin(), train.end(), id)) {
                throw ValidationError("holdout overlaps the training set (config " + std::to_string(id) + ")");
            }
        }
    }
    return r_squared(model, l, holdout);
}

double r_squared(const Predictor& model, const Landscape& l, std::span<const ConfigId> holdout) {
    if (holdout.empty()) throw ValidationError("evaluation set is empty");
    std::vector<double> y(holdout.size());
    for (std::size_t i = 0; i < holdout.size(); ++i) y[i] = l.fitness(holdout[i]);
    const double mean = stats::mean(y);
    std::vector<double> sse(holdout.size()), sst(holdout.size());
    for (std::size_t i = 0; i < holdout.size(); ++i) {
        const double e = y[i] - model.predict(holdout[i]);
        const double d = y[i] - mean;
        sse[i] = e * e;
        sst[i] = d * d;
    }
    const double total = stats::pairwise_sum(sst);
    if (total == 0.0) throw PreconditionError("R^2 is undefined: evaluation fitness has zero variance");
    return 1.0 - stats::pairwise_sum(sse) / total;
}

double top_n_recall(const Predictor& model, const Landscape& l, std::uint64_t k, std::uint64_t n) {
    if (k == 0) throw ValidationError("top-N recall needs K > 0");
    if (k > n || n > l.size()) {
        throw ValidationError("top-N recall needs K <= N <= " + std::to_string(l.size()) + " (K=" + std::to_string(k) +
                              ", N=" + std::to_string(n) + ")");
    }
    const auto truth = top_ids(l, k);
    const auto ids = l.ids();
    std::vector<std::pair<double, ConfigId>> ranked(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ranked[i] = {l.orient(model.predict(ids[i])), ids[i]};
    auto by_pred = [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(), by_pred);
    std::vector<ConfigId> predicted(n);
    for (std::uint64_t i = 0; i < n; ++i) predicted[i] = ranked[i].second;
    std::sort(predicted.begin(), predicted.end());
    std::uint64_t hits = 0;
    for (const auto id : truth) hits += std::binary_search(predicted.begin(), predicted.end(), id) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

namespace {

/// Options split into indicator columns: level 1..L-1 of each option.
std::vector<Monomial> expand_monomials(const ConfigSpace& space, std::size_t degree_cap) {
    std::vector<Monomial> out;
    const std::size_t n = space.option_count();
    for (std::size_t d = 1; d <= std::min(degree_cap, n); ++d) {
        // Lexicographic option subsets of size d.
        std::vector<std::size_t> subset(d);
        std::iota(subset.begin(), subset.end(), 0);
        while (true) {
            std::vector<std::size_t> lv(d, 1);
            while (true) {
                Monomial m;
                for (std::size_t t = 0; t < d; ++t) m.factors.emplace_back(subset[t], lv[t]);
                out.push_back(std::move(m));
                bool done = true;
                for (std::size_t t = d; t > 0; --t) {
                    if (++lv[t - 1] < space.level_count(subset[t - 1])) {
                        done = false;
                        break;
                    }
                    lv[t - 1] = 1;
                }
                if (done) break;
            }
            std::size_t i = d;
            while (i > 0 && subset[i - 1] == n - d + (i - 1)) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::size_t t = i; t < d; ++t) subset[t] = subset[t - 1] + 1;
        }
    }
    return out;
}

/// Product of centered level indicators: prod (1[level] - share of level).
double centered_product(const ConfigSpace& space, const std::vector<std::vector<double>>& level_share, ConfigId id,
                        const Monomial& m) {
    double v = 1.0;
    for (const auto& [opt, level] : m.factors) {
        v *= (space.level_of(id, opt) == level ? 1.0 : 0.0) - level_share[opt][level];
    }
    return v;
}

double soft_threshold(double z, double g) {
    if (z > g) return z - g;
    if (z < -g) return z + g;
    return 0.0;
}

struct CdResult {
    std::vector<double> b;
    double intercept = 0.0;
    std::vector<double> objective;
    bool converged = false;
    std::size_t iterations = 0;
    double max_change = 0.0;
    double residual_rms = 0.0;
};

/// Lasso on the rows `rows` of a column-major design (stride `total_rows`),
/// centering columns and response over those rows.
CdResult coordinate_descent(const std::vector<double>& x, std::size_t total_rows, std::size_t cols,
                            const std::vector<double>& y, std::span<const std::size_t> rows, double lambda,
                            std::size_t max_iter, double tol) {
    const std::size_t n = rows.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> xc(n * cols);
    std::vector<double> col_mean(cols), z(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const double* col = x.data() + j * total_rows;
        double s = 0.0;
        for (const auto r : rows) s += col[r];
        col_mean[j] = s * inv_n;
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = col[rows[i]] - col_mean[j];
            xc[j * n + i] = v;
            ss += v * v;
        }
        z[j] = ss * inv_n;
    }
    double y_mean = 0.0;
    for (const auto r : rows) y_mean += y[r];
    y_mean *= inv_n;
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[rows[i]] - y_mean;

    CdResult out;
    out.b.assign(cols, 0.0);
    auto objective = [&] {
        double rss = 0.0;
        for (const double r : resid) rss += r * r;
        double l1 = 0.0;
        for (const double v : out.b) l1 += std::abs(v);
        return 0.5 * rss * inv_n + lambda * l1;
    };
    for (std::size_t it = 0; it < max_iter; ++it) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (z[j] <= 0.0) continue;
            const double* col = xc.data() + j * n;
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += col[i] * resid[i];
            const double old = out.b[j];
            const double updated = soft_threshold(dot * inv_n + z[j] * old, lambda) / z[j];
            const double delta = updated - old;
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) resid[i] -= col[i] * delta;
                out.b[j] = updated;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        out.objective.push_back(objective());
        out.iterations = it + 1;
        out.max_change = max_change;
        if (max_change < tol) {
            out.converged = true;
            break;
        }
    }
    out.intercept = y_mean;
    for (std::size_t j = 0; j < cols; ++j) out.intercept -= out.b[j] * col_mean[j];
    double rss = 0.0;
    for (const double r : resid) rss += r * r;
    out.residual_rms = std::sqrt(rss * inv_n);
    return out;
}

}  // namespace

std::uint64_t lasso_column_count(const ConfigSpace& space, std::size_t degree_cap) {
    // Elementary symmetric sums of (L_k - 1), saturating.
    const std::size_t cap = std::min(degree_cap, space.option_count());
    std::vector<double> e(cap + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        const double w = static_cast<double>(space.level_count(k) - 1);
        for (std::size_t d = cap; d >= 1; --d) e[d] += e[d - 1] * w;
    }
    double total = 0.0;
    for (std::size_t d = 1; d <= cap; ++d) total += e[d];
    if (total >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(total);
}

LassoFit lasso_poly(const Landscape& l, const LassoParams& params) {
    const auto& space = l.space();
    if (params.degree_cap == 0) throw ValidationError("LASSO degree cap must be at least 1");
    const auto columns = lasso_column_count(space, params.degree_cap);
    if (columns > params.max_columns) {
        throw ValidationError("LASSO design has " + std::to_string(columns) + " columns, above the bound of " +
                              std::to_string(params.max_columns) + " (lower the degree cap)");
    }
    auto ids = l.ids();
    if (params.max_rows > 0 && ids.size() > params.max_rows) {
        Rng rng(params.seed);
        const auto picked = sample_without_replacement(ids.size(), params.max_rows, rng);
        std::vector<ConfigId> sub;
        sub.reserve(picked.size());
        for (const auto i : picked) sub.push_back(ids[i]);
        ids = std::move(sub);
    }
    const std::size_t n = ids.size();
    if (n < 2) throw ValidationError("LASSO needs at least 2 configurations");
    if (static_cast<double>(n) * static_cast<double>(columns) > static_cast<double>(params.max_cells)) {
        throw ValidationError("LASSO design of " + std::to_string(n) + " x " + std::to_string(columns) +
                              " exceeds the cell bound of " + std::to_string(params.max_cells) +
                              " (subsample rows or lower the degree cap)");
    }

    LassoFit fit;
    fit.space = space;
    fit.degree_cap = params.degree_cap;
    fit.rows = ids;
    fit.terms = expand_monomials(space, params.degree_cap);
    const std::size_t p = fit.terms.size();

    fit.level_share.resize(space.option_count());
    for (std::size_t o = 0; o < space.option_count(); ++o) {
        auto& share = fit.level_share[o];
        share.assign(space.level_count(o), 0.0);
        for (const auto id : ids) share[space.level_of(id, o)] += 1.0;
        for (auto& v : share) v /= static_cast<double>(n);
    }

    // Standardized design, column-major.
    std::vector<double> x(n * p);
    std::vector<double> mean(p), sd(p);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = l.fitness(ids[i]);
    for (std::size_t j = 0; j < p; ++j) {
        double* col = x.data() + j * n;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = centered_product(space, fit.level_share, ids[i], fit.terms[j]);
            s += col[i];
        }
        mean[j] = s / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (col[i] - mean[j]) * (col[i] - mean[j]);
        sd[j] = std::sqrt(ss / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) col[i] = sd[j] > 0.0 ? (col[i] - mean[j]) / sd[j] : 0.0;
    }
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    double lambda = params.lambda;
    if (lambda < 0.0) {
        fit.lambda_from_cv = true;
        const double y_mean = stats::mean(y);
        double lambda_max = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += x[j * n + i] * (y[i] - y_mean);
            lambda_max = std::max(lambda_max, std::abs(dot) / static_cast<double>(n));
        }
        const std::size_t folds = std::clamp<std::size_t>(params.cv_folds, 2, n);
        const std::size_t grid = std::max<std::size_t>(2, params.lambda_grid);
        std::vector<std::size_t> perm(all_rows);
        Rng rng(derive_seed(params.seed, "cv"));
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        double best_err = std::numeric_limits<double>::infinity();
        lambda = 0.0;
        for (std::size_t g = 0; g < grid && lambda_max > 0.0; ++g) {
            const double lam = lambda_max * std::pow(1e-4, static_cast<double>(g) / static_cast<double>(grid - 1));
            double err = 0.0;
            for (std::size_t f = 0; f < folds; ++f) {
                std::vector<std::size_t> train, test;
                for (std::size_t i = 0; i < n; ++i) (i % folds == f ? test : train).push_back(perm[i]);
                std::sort(train.begin(), train.end());
                const auto r = coordinate_descent(x, n, p, y, train, lam, params.max_iter, params.tol);
                for (const auto i : test) {
                    double pred = r.intercept;
                    for (std::size_t j = 0; j < p; ++j) pred += r.b[j] * x[j * n + i];
                    err += (y[i] - pred) * (y[i] - pred);
                }
            }
            if (err < best_err) {
                best_err = err;
                lambda = lam;
            }
        }
    }
    fit.lambda = lambda;

    const auto r = coordinate_descent(x, n, p, y, all_rows, lambda, params.max_iter, params.tol);
    fit.objective_history = r.objective;
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.final_max_change = r.max_change;
    fit.residual_rms = r.residual_rms;
    fit.standardized_coefficients = r.b;
    fit.coefficients.resize(p);
    fit.intercept = r.intercept;  // columns are already centered over all rows
    for (std::size_t j = 0; j < p; ++j) {
        fit.coefficients[j] = sd[j] > 0.0 ? r.b[j] / sd[j] : 0.0;
        fit.intercept -= fit.coefficients[j] * mean[j];
    }

    const std::size_t max_degree = std::min(params.degree_cap, space.option_count());
    fit.terms_per_degree.assign(max_degree, 0);
    fit.nonzero_fraction_per_degree.assign(max_degree, 0.0);
    std::vector<std::uint64_t> nonzero(max_degree, 0);
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t d = fit.terms[j].degree() - 1;
        ++fit.terms_per_degree[d];
        if (std::abs(r.b[j]) > params.zero_threshold) ++nonzero[d];
    }
    for (std::size_t d = 0; d < max_degree; ++d) {
        if (fit.terms_per_degree[d] > 0) {
            fit.nonzero_fraction_per_degree[d] =
                static_cast<double>(nonzero[d]) / static_cast<double>(fit.terms_per_degree[d]);
        }
    }
    return fit;
}

double LassoFit::predict(ConfigId id) const {
    double out = intercept;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        if (coefficients[j] != 0.0) out += coefficients[j] * centered_product(space, level_share, id, terms[j]);
    }
    return out;
}

PredictionTable::PredictionTable(std::vector<std::pair<ConfigId, double>> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].first == entries_[i - 1].first) {
            throw ValidationError("duplicate prediction for config " + std::to_string(entries_[i].first));
        }
    }
}

PredictionTable PredictionTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open prediction file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

PredictionTable PredictionTable::parse(std::string_view text, const std::string& source) {
    std::vector<std::pair<ConfigId, double>> entries;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": expected 'config_id,prediction'");
        }
        const auto id_text = line.substr(0, comma);
        const auto value_text = line.substr(comma + 1);
        if (header) {
            header = false;
            if (!parse_double(id_text)) continue;  // header row
        }
        const auto id = parse_double(id_text);
        const auto value = parse_double(value_text);
        if (!id || *id < 0 || *id != std::floor(*id) || *id > 9.007199254740992e15) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": invalid config id '" +
                                  std::string(id_text) + "'");
        }
        if (!value || !std::isfinite(*value)) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": invalid prediction '" +
                                  std::string(value_text) + "'");
        }
        entries.emplace_back(static_cast<ConfigId>(*id), *value);
    }
    if (entries.empty()) throw ValidationError(source + ": no predictions");
    return PredictionTable(std::move(entries));
}

bool PredictionTable::has(ConfigId id) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<ConfigId, double>{id, -HUGE_VAL});
    return it != entries_.end() && it->first == id;
}

double PredictionTable::predict(ConfigId id) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<ConfigId, double>{id, -HUGE_VAL});
    if (it == entries_.end() || it->first != id) {
        throw PreconditionError("no prediction for config " + std::to_string(id));
    }
    return it->second;
}

std::string predictions_csv(const Predictor& model, std::span<const ConfigId> ids) {
    std::string out = "config_id,prediction\n";
    for (const auto id : ids) {
        out += std::to_string(id);
        out += ',';
        out += format_double(model.predict(id));
        out += '\n';
    }
    return out;
}

std::vector<double> predict_all(const Predictor& model, const Landscape& l) {
    std::vector<double> out;
    out.reserve(l.size());
    l.for_each([&](ConfigId id, double) { out.push_back(model.predict(id)); });
    return out;
}

}  // namespace confla
