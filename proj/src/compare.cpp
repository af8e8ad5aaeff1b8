#include "confla/compare.hpp"

#include <algorithm>
#include <cmath>

#include "confla/emd.hpp"
#include "confla/error.hpp"
#include "confla/random.hpp"
#include "confla/stats.hpp"

namespace confla {

void require_same_space(const Landscape& a, const Landscape& b) {
    if (!(a.space() == b.space())) {
        throw ValidationError("landscapes must share an identical configuration space (options, levels and objective)");
    }
}

FitnessCorrelation fitness_correlation(const Landscape& a, const Landscape& b) {
    require_same_space(a, b);
    FitnessCorrelation out;
    std::vector<double> x, y;
    if (a.complete() && b.complete()) {
        const auto da = a.dense(), db = b.dense();
        x.assign(da.begin(), da.end());
        y.assign(db.begin(), db.end());
    } else {
        out.common_support = true;
        a.for_each([&](ConfigId id, double f) {
            if (const auto g = b.try_fitness(id)) {
                x.push_back(f);
                y.push_back(*g);
            }
        });
    }
    out.support = x.size();
    if (x.size() < 2) throw PreconditionError("fitness correlation needs at least 2 shared configurations");
    out.pearson = stats::pearson(x, y);
    out.spearman = stats::spearman(x, y);
    return out;
}

std::vector<std::uint64_t> ordinal_ranks(const Landscape& l) {
    l.require_complete("ranks");
    const auto order = best_first_order(l);
    std::vector<std::uint64_t> rank(order.size());
    for (std::uint64_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
}

std::vector<double> percentiles(const Landscape& l) {
    l.require_complete("percentiles");
    const auto order = best_first_order(l);
    const auto dense = l.dense();
    const double n = static_cast<double>(order.size());
    std::vector<double> out(order.size());
    std::uint64_t first_of_group = 0;
    for (std::uint64_t r = 0; r < order.size(); ++r) {
        if (r > 0 && dense[order[r]] != dense[order[r - 1]]) first_of_group = r;
        out[order[r]] = static_cast<double>(first_of_group) / n;
    }
    return out;
}

TopRegionOverlap top_region_overlap(const Landscape& a, const Landscape& b, double q) {
    require_same_space(a, b);
    a.require_complete("top-region overlap");
    b.require_complete("top-region overlap");
    const std::uint64_t n = a.size();
    if (!(q > 0.0 && q <= 1.0)) throw ValidationError("q must be in (0, 1]");
    const std::uint64_t m = top_count(q, n);
    if (m < 1 || q * static_cast<double>(n) < 1.0 - 1e-9) {
        throw ValidationError("top-q region is empty (q * N < 1)");
    }
    TopRegionOverlap out;
    out.q = q;
    out.size = m;
    auto ta = top_ids(a, m), tb = top_ids(b, m);
    const auto ra = ordinal_ranks(a), rb = ordinal_ranks(b);
    const auto pa = percentiles(a), pb = percentiles(b);
    const double nn = static_cast<double>(n);

    auto shifts = [&](const std::vector<ConfigId>& top, double& shake, double& pshift) {
        std::vector<double> s(top.size()), p(top.size());
        for (std::size_t i = 0; i < top.size(); ++i) {
            const auto id = top[i];
            s[i] = std::abs(static_cast<double>(ra[id]) - static_cast<double>(rb[id])) / nn;
            p[i] = std::abs(pa[id] - pb[id]);
        }
        shake = stats::mean(s);
        pshift = stats::mean(p);
    };
    shifts(ta, out.shake_up_ab, out.percentile_shift_ab);
    shifts(tb, out.shake_up_ba, out.percentile_shift_ba);

    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    std::vector<ConfigId> common;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
    out.jaccard = static_cast<double>(common.size()) / static_cast<double>(2 * m - common.size());
    return out;
}

OptimaSimilarity local_optima_similarity(const ConfigSpace& space, std::span<const ConfigId> optima_a,
                                         std::span<const ConfigId> optima_b, std::uint64_t sample_cap,
                                         std::uint64_t seed) {
    if (optima_a.empty() || optima_b.empty()) throw PreconditionError("local optima set is empty");
    if (sample_cap == 0) throw ValidationError("EMD sample cap must be positive");
    std::vector<ConfigId> a(optima_a.begin(), optima_a.end()), b(optima_b.begin(), optima_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());

    OptimaSimilarity out;
    out.count_a = a.size();
    out.count_b = b.size();
    std::vector<ConfigId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    out.jaccard = static_cast<double>(common.size()) / static_cast<double>(a.size() + b.size() - common.size());

    auto reduce = [&](const std::vector<ConfigId>& set, std::uint64_t stream) {
        if (set.size() <= sample_cap) return set;
        out.approximate = true;
        Rng rng(derive_seed(seed, stream));
        std::vector<ConfigId> sub;
        for (const auto i : sample_without_replacement(set.size(), sample_cap, rng)) sub.push_back(set[i]);
        return sub;
    };
    const auto sa = reduce(a, 0);
    const auto sb = reduce(b, 1);
    out.used_a = sa.size();
    out.used_b = sb.size();
    out.emd = emd_uniform(space, sa, sb);
    return out;
}

GlobalOptimumShift global_optimum_shift(const Landscape& a, const Landscape& b) {
    require_same_space(a, b);
    a.require_complete("global optimum shift");
    b.require_complete("global optimum shift");
    GlobalOptimumShift out;
    out.optimum_a = global_optimum(a).id;
    out.optimum_b = global_optimum(b).id;
    out.distance = a.space().distance(out.optimum_a, out.optimum_b);
    const auto pa = percentiles(a), pb = percentiles(b);
    const auto ra = ordinal_ranks(a), rb = ordinal_ranks(b);
    const double n = static_cast<double>(a.size());
    out.rank_shift_ab = std::abs(pb[out.optimum_a] - pa[out.optimum_a]);
    out.rank_shift_ba = std::abs(pa[out.optimum_b] - pb[out.optimum_b]);
    out.ordinal_shift_ab = static_cast<double>(rb[out.optimum_a]) / n;
    out.ordinal_shift_ba = static_cast<double>(ra[out.optimum_b]) / n;
    return out;
}

double importance_consistency(const ImportanceVector& a, const ImportanceVector& b) {
    if (a.options.size() != b.options.size()) throw ValidationError("importance vectors cover different options");
    if (a.options.size() < 2) throw PreconditionError("importance consistency needs at least 2 options");
    try {
        return stats::spearman(a.values(), b.values());
    } catch (const ValidationError& e) {
        throw PreconditionError(std::string("importance consistency undefined: ") + e.what());
    }
}

double interaction_consistency(const InteractionMatrix& a, const InteractionMatrix& b) {
    if (a.option_count != b.option_count) throw ValidationError("interaction matrices cover different options");
    if (a.pairs.size() < 2) throw PreconditionError("interaction consistency needs at least 2 option pairs");
    try {
        return stats::spearman(a.upper_triangle(), b.upper_triangle());
    } catch (const ValidationError& e) {
        throw PreconditionError(std::string("interaction consistency undefined: ") + e.what());
    }
}

Consistency consistency(const ImportanceVector& ia, const ImportanceVector& ib, const InteractionMatrix& xa,
                        const InteractionMatrix& xb) {
    Consistency out;
    out.importance_spearman = importance_consistency(ia, ib);
    if (xa.pairs.size() >= 2) out.interaction_spearman = interaction_consistency(xa, xb);
    return out;
}

ComparisonReport compare_landscapes(const Landscape& a, const Landscape& b, const ComparisonParams& params) {
    require_same_space(a, b);
    a.require_complete("compare");
    b.require_complete("compare");
    ComparisonReport out;
    out.correlation = fitness_correlation(a, b);
    out.top = top_region_overlap(a, b, params.q);
    const auto oa = find_local_optima(a, params.threads);
    const auto ob = find_local_optima(b, params.threads);
    out.optima = local_optima_similarity(a.space(), oa.optima, ob.optima, params.emd_cap,
                                         derive_seed(params.seed, "local-optima-emd"));
    out.global = global_optimum_shift(a, b);
    if (params.with_consistency) {
        const auto ia = importance(a, params.effects, params.threads);
        const auto ib = importance(b, params.effects, params.threads);
        const auto xa = pairwise_interactions(a, params.effects, params.threads);
        const auto xb = pairwise_interactions(b, params.effects, params.threads);
        out.consistency = consistency(ia, ib, xa, xb);
    }
    return out;
}

}  // namespace confla
