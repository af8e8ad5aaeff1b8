#include "confla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "confla/parallel.hpp"
#include "confla/random.hpp"

namespace confla {

std::string_view to_string(SearchStrategy strategy) {
    return strategy == SearchStrategy::best_improvement ? "best" : "first";
}

namespace {

/// Move rule with a reusable neighbor buffer, for tight loops.
class MoveRule {
public:
    MoveRule(const Landscape& l, SearchStrategy strategy, std::uint64_t seed)
        : l_(l), strategy_(strategy), seed_(seed) {}

    ConfigId operator()(ConfigId id) {
        const double here = l_.oriented(id);
        if (strategy_ == SearchStrategy::best_improvement) {
            ConfigId best = id;
            double best_fit = here;
            l_.space().for_each_neighbor(id, [&](ConfigId nb) {
                const double f = l_.oriented(nb);
                if (f > best_fit) {
                    best_fit = f;
                    best = nb;
                }
            });
            return best;
        }
        buffer_.clear();
        l_.space().for_each_neighbor(id, [&](ConfigId nb) { buffer_.push_back(nb); });
        const std::size_t deg = buffer_.size();
        const std::size_t offset = static_cast<std::size_t>(derive_seed(seed_, id) % deg);
        for (std::size_t i = 0; i < deg; ++i) {
            const ConfigId nb = buffer_[(offset + i) % deg];
            if (l_.oriented(nb) > here) return nb;
        }
        return id;
    }

private:
    const Landscape& l_;
    SearchStrategy strategy_;
    std::uint64_t seed_;
    std::vector<ConfigId> buffer_;
};

ConfigId random_neighbor(const ConfigSpace& space, ConfigId id, Rng& rng, std::vector<ConfigId>& buffer) {
    buffer.clear();
    space.for_each_neighbor(id, [&](ConfigId nb) { buffer.push_back(nb); });
    return buffer[static_cast<std::size_t>(rng.below(buffer.size()))];
}

/// Strict ordering: fitter first, then lower id.
struct BestFirst {
    const Landscape& l;
    bool operator()(ConfigId a, ConfigId b) const {
        const double fa = l.oriented(a);
        const double fb = l.oriented(b);
        if (fa != fb) return fa > fb;
        return a < b;
    }
};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

ConfigId improving_move(const Landscape& l, ConfigId id, SearchStrategy strategy, std::uint64_t seed) {
    if (!l.space().contains(id)) throw ValidationError("ConfigId " + std::to_string(id) + " outside the space");
    MoveRule rule(l, strategy, seed);
    return rule(id);
}

std::vector<ConfigId> best_first_order(const Landscape& l) {
    auto ids = l.ids();
    std::sort(ids.begin(), ids.end(), BestFirst{l});
    return ids;
}

std::vector<ConfigId> top_ids(const Landscape& l, std::uint64_t count) {
    auto ids = l.ids();
    count = std::min<std::uint64_t>(count, ids.size());
    const auto mid = ids.begin() + static_cast<std::ptrdiff_t>(count);
    std::partial_sort(ids.begin(), mid, ids.end(), BestFirst{l});
    ids.resize(count);
    return ids;
}

std::uint64_t top_count(double q, std::uint64_t n) {
    const double raw = q * static_cast<double>(n);
    return static_cast<std::uint64_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

stats::DistributionStats fitness_distribution(const Landscape& l, bool normalize) {
    if (l.size() < 2) throw PreconditionError("distribution needs at least two configurations");
    auto v = l.values();
    if (normalize) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        const double min = *lo;
        const double range = *hi - *lo;
        for (auto& x : v) x = range > 0.0 ? (x - min) / range : 0.0;
    }
    return stats::describe(v);
}

LocalOptimaReport find_local_optima(const Landscape& l, unsigned threads) {
    l.require_complete("local_optima");
    const std::uint64_t n = l.size();
    const auto chunks = chunk_count(n, threads);
    std::vector<std::vector<ConfigId>> optima(chunks);
    std::vector<std::uint64_t> plateaus(chunks, 0);
    const auto dense = l.dense();
    const bool maximize = l.objective() == Objective::maximize;
    parallel_chunks(n, threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
        for (ConfigId id = begin; id < end; ++id) {
            const double here = maximize ? dense[id] : -dense[id];
            bool improving = false;
            bool equal = false;
            l.space().for_each_neighbor(id, [&](ConfigId nb) {
                const double f = maximize ? dense[nb] : -dense[nb];
                if (f > here) {
                    improving = true;
                } else if (f == here) {
                    equal = true;
                }
            });
            if (improving) continue;
            if (equal) {
                ++plateaus[c];
            } else {
                optima[c].push_back(id);
            }
        }
    });
    LocalOptimaReport report;
    report.cardinality = n;
    for (std::size_t c = 0; c < chunks; ++c) {
        report.optima.insert(report.optima.end(), optima[c].begin(), optima[c].end());
        report.plateau_count += plateaus[c];
    }
    report.proportion = static_cast<double>(report.optima.size()) / static_cast<double>(n);
    return report;
}

BasinAssignment assign_basins(const Landscape& l, SearchStrategy strategy, std::uint64_t seed, unsigned threads) {
    l.require_complete("basins");
    const std::uint64_t n = l.size();
    BasinAssignment out;
    out.strategy = strategy;
    out.seed = seed;
    out.optima = find_local_optima(l, threads);

    std::vector<ConfigId> next(n);
    parallel_chunks(n, threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        MoveRule rule(l, strategy, seed);
        for (ConfigId id = begin; id < end; ++id) next[id] = rule(id);
    });

    constexpr std::uint32_t kUnresolved = std::numeric_limits<std::uint32_t>::max();
    out.attractor.assign(n, kNoOptimum);
    out.steps.assign(n, kUnresolved);
    const auto& optima = out.optima.optima;
    auto is_optimum = [&](ConfigId id) { return std::binary_search(optima.begin(), optima.end(), id); };

    std::vector<ConfigId> path;
    for (ConfigId id = 0; id < n; ++id) {
        if (out.steps[id] != kUnresolved) continue;
        path.clear();
        ConfigId cur = id;
        while (out.steps[cur] == kUnresolved) {
            path.push_back(cur);
            if (next[cur] == cur) break;
            cur = next[cur];
        }
        if (out.steps[cur] == kUnresolved) {
            // cur is the terminal of a fresh path: an optimum or a plateau.
            out.attractor[cur] = is_optimum(cur) ? cur : kNoOptimum;
            out.steps[cur] = 0;
            path.pop_back();
        }
        while (!path.empty()) {
            const ConfigId v = path.back();
            path.pop_back();
            out.attractor[v] = out.attractor[next[v]];
            out.steps[v] = out.steps[next[v]] + 1;
        }
    }

    out.basins.resize(optima.size());
    std::vector<double> step_sums(optima.size(), 0.0);
    for (std::size_t i = 0; i < optima.size(); ++i) out.basins[i].optimum = optima[i];
    for (ConfigId id = 0; id < n; ++id) {
        const ConfigId a = out.attractor[id];
        if (a == kNoOptimum) {
            ++out.plateau_bucket;
            continue;
        }
        const auto idx = static_cast<std::size_t>(std::lower_bound(optima.begin(), optima.end(), a) - optima.begin());
        ++out.basins[idx].size;
        step_sums[idx] += out.steps[id];
    }
    for (std::size_t i = 0; i < optima.size(); ++i) {
        out.basins[i].radius = step_sums[i] / static_cast<double>(out.basins[i].size);
    }
    return out;
}

LocalOptimaNetwork build_lon(const Landscape& l, const BasinAssignment& basins, const LonParams& params,
                             unsigned threads) {
    if (params.attempts == 0) throw ValidationError("LON needs at least one attempt per optimum");
    if (params.perturbation_strength < 2) throw ValidationError("LON perturbation strength must be >= 2");
    if (params.strategy != basins.strategy) {
        throw ValidationError("LON strategy differs from the basin assignment's strategy");
    }
    const auto& optima = basins.optima.optima;
    LocalOptimaNetwork lon;
    lon.params = params;
    lon.vertices.resize(optima.size());
    for (std::size_t v = 0; v < optima.size(); ++v) {
        lon.vertices[v] = {optima[v], l.fitness(optima[v]), basins.basins[v].size};
    }
    lon.lost.assign(optima.size(), 0);

    const auto chunks = chunk_count(optima.size(), threads);
    std::vector<std::vector<LonEdge>> chunk_edges(chunks);
    parallel_chunks(optima.size(), threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t c) {
        std::vector<ConfigId> buffer;
        for (std::uint64_t v = begin; v < end; ++v) {
            Rng rng(derive_seed(params.seed, v));
            std::map<std::size_t, std::uint64_t> counts;
            for (std::size_t a = 0; a < params.attempts; ++a) {
                ConfigId x = optima[v];
                for (std::size_t s = 0; s < params.perturbation_strength; ++s) {
                    x = random_neighbor(l.space(), x, rng, buffer);
                }
                const ConfigId end_opt = basins.attractor[x];
                if (end_opt == kNoOptimum) {
                    ++lon.lost[v];
                    continue;
                }
                const auto to = static_cast<std::size_t>(std::lower_bound(optima.begin(), optima.end(), end_opt) -
                                                         optima.begin());
                ++counts[to];
            }
            for (const auto& [to, w] : counts) chunk_edges[c].push_back({static_cast<std::size_t>(v), to, w});
        }
    });
    for (auto& e : chunk_edges) lon.edges.insert(lon.edges.end(), e.begin(), e.end());
    return lon;
}

LocalOptimaNetwork build_lon(const Landscape& l, const LonParams& params, unsigned threads) {
    return build_lon(l, assign_basins(l, params.strategy, params.seed, threads), params, threads);
}

AutocorrelationResult autocorrelation(const Landscape& l, const AutocorrelationParams& params, unsigned threads) {
    l.require_complete("autocorrelation");
    if (params.walks == 0) throw ValidationError("autocorrelation needs at least one walk");
    if (params.max_lag == 0) throw ValidationError("autocorrelation max lag must be >= 1");
    if (params.walk_length <= params.max_lag) {
        throw ValidationError("autocorrelation walk length must exceed the maximum lag");
    }
    const std::size_t points = params.walk_length + 1;
    std::vector<std::vector<double>> walks(params.walks);
    parallel_chunks(params.walks, threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        std::vector<ConfigId> buffer;
        for (std::uint64_t w = begin; w < end; ++w) {
            Rng rng(derive_seed(params.seed, w));
            auto& f = walks[w];
            f.resize(points);
            ConfigId cur = rng.below(l.space().cardinality());
            f[0] = l.fitness(cur);
            for (std::size_t t = 1; t < points; ++t) {
                cur = random_neighbor(l.space(), cur, rng, buffer);
                f[t] = l.fitness(cur);
            }
        }
    });

    AutocorrelationResult result;
    result.params = params;
    const std::size_t nw = walks.size();
    std::vector<double> sx(nw), sy(nw), sxx(nw), syy(nw), sxy(nw);
    for (std::size_t d = 1; d <= params.max_lag; ++d) {
        const std::size_t pairs = points - d;
        const double total = static_cast<double>(pairs * nw);
        for (std::size_t w = 0; w < nw; ++w) {
            const auto& f = walks[w];
            long double a = 0.0L, b = 0.0L;
            for (std::size_t t = 0; t < pairs; ++t) {
                a += f[t];
                b += f[t + d];
            }
            sx[w] = static_cast<double>(a);
            sy[w] = static_cast<double>(b);
        }
        const double mx = stats::pairwise_sum(sx) / total;
        const double my = stats::pairwise_sum(sy) / total;
        for (std::size_t w = 0; w < nw; ++w) {
            const auto& f = walks[w];
            long double xx = 0.0L, yy = 0.0L, xy = 0.0L;
            for (std::size_t t = 0; t < pairs; ++t) {
                const double dx = f[t] - mx;
                const double dy = f[t + d] - my;
                xx += dx * dx;
                yy += dy * dy;
                xy += dx * dy;
            }
            sxx[w] = static_cast<double>(xx);
            syy[w] = static_cast<double>(yy);
            sxy[w] = static_cast<double>(xy);
        }
        const double vx = stats::pairwise_sum(sxx);
        const double vy = stats::pairwise_sum(syy);
        if (vx == 0.0 || vy == 0.0) {
            throw PreconditionError("autocorrelation undefined: zero variance along all walks");
        }
        result.rho.push_back(stats::pairwise_sum(sxy) / std::sqrt(vx * vy));
    }
    return result;
}

ProminentRegionReport prominent_region(const Landscape& l, double q, std::uint64_t pair_sample_cap,
                                       std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("prominent region fraction q must lie in (0, 1)");
    const std::uint64_t m = top_count(q, l.size());
    if (m < 2) throw PreconditionError("prominent region needs q*N >= 2 members");
    ProminentRegionReport report;
    report.q = q;
    report.members = top_ids(l, m);
    const auto& members = report.members;
    const auto& space = l.space();
    Rng rng(seed);

    std::vector<double> member_d;
    if (m * m <= pair_sample_cap) {
        report.exact_pairs = true;
        member_d.reserve(m * (m - 1) / 2);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                member_d.push_back(static_cast<double>(space.distance(members[i], members[j])));
            }
        }
    } else {
        const std::uint64_t samples = std::max<std::uint64_t>(pair_sample_cap, 1);
        member_d.reserve(samples);
        for (std::uint64_t s = 0; s < samples; ++s) {
            const auto i = rng.below(m);
            auto j = rng.below(m - 1);
            if (j >= i) ++j;
            member_d.push_back(static_cast<double>(space.distance(members[i], members[j])));
        }
    }

    const auto all = l.complete() ? std::vector<ConfigId>{} : l.ids();
    const std::uint64_t pool = l.size();
    auto pick = [&](std::uint64_t idx) { return l.complete() ? idx : all[idx]; };
    std::vector<double> random_d;
    random_d.reserve(member_d.size());
    for (std::size_t s = 0; s < member_d.size(); ++s) {
        const auto i = rng.below(pool);
        auto j = rng.below(pool - 1);
        if (j >= i) ++j;
        random_d.push_back(static_cast<double>(space.distance(pick(i), pick(j))));
    }
    report.member_distances = stats::describe(member_d);
    report.random_distances = stats::describe(random_d);
    report.ks = stats::ks_two_sample(member_d, random_d);

    std::vector<ConfigId> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    DisjointSets sets(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        space.for_each_neighbor(sorted[i], [&](ConfigId nb) {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), nb);
            if (it != sorted.end() && *it == nb) sets.unite(i, static_cast<std::size_t>(it - sorted.begin()));
        });
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sets.find(i) == i) ++report.component_count;
    }
    return report;
}

GlobalOptimum global_optimum(const Landscape& l) {
    if (l.size() == 0) throw PreconditionError("global optimum of an empty landscape");
    GlobalOptimum g;
    bool first = true;
    l.for_each([&](ConfigId id, double f) {
        if (first || l.better(f, g.fitness)) {
            g = {id, f, 1};
            first = false;
        } else if (f == g.fitness) {
            ++g.tied;
        }
    });
    return g;
}

DistanceToGlobalReport distance_to_global(const Landscape& l, const LocalOptimaReport& optima, std::uint64_t sample_cap,
                                          std::uint64_t seed) {
    if (optima.optima.empty()) throw PreconditionError("distance_to_global: the landscape has no local optima");
    DistanceToGlobalReport report;
    report.global = global_optimum(l);
    report.optima_count = optima.optima.size();
    std::vector<ConfigId> chosen;
    if (sample_cap > 0 && optima.optima.size() > sample_cap) {
        Rng rng(seed);
        report.sampled = true;
        for (auto idx : sample_without_replacement(optima.optima.size(), sample_cap, rng)) {
            chosen.push_back(optima.optima[idx]);
        }
    } else {
        chosen = optima.optima;
    }
    std::vector<double> d;
    d.reserve(chosen.size());
    for (ConfigId id : chosen) d.push_back(static_cast<double>(l.space().distance(id, report.global.id)));
    report.distances = stats::describe(d);
    return report;
}

}  // namespace confla
