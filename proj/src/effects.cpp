#include "confla/effects.hpp"

#include <algorithm>
#include <cmath>

#include "confla/parallel.hpp"
#include "confla/random.hpp"
#include "confla/stats.hpp"

namespace confla {

std::vector<Transition> option_transitions(const OptionSpec& option) {
    std::vector<Transition> out;
    const std::size_t levels = option.level_count();
    if (option.kind == OptionKind::grid) {
        for (std::size_t u = 0; u + 1 < levels; ++u) out.push_back({u, u + 1});
    } else {
        for (std::size_t u = 0; u < levels; ++u) {
            for (std::size_t v = u + 1; v < levels; ++v) out.push_back({u, v});
        }
    }
    return out;
}

namespace {

/// Background index -> id with a zero digit inserted at `option`.
ConfigId insert_zero_digit(const ConfigSpace& space, std::uint64_t b, std::size_t option) {
    const std::uint64_t s = space.stride(option);
    return (b % s) + (b / s) * s * space.level_count(option);
}

double fitness_range(const Landscape& l) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    l.for_each([&](ConfigId, double f) {
        if (first) {
            lo = hi = f;
            first = false;
        }
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    });
    return hi > lo ? hi - lo : 1.0;
}

/// Background indices to evaluate: all of them, or a seeded subsample.
std::vector<std::uint64_t> choose_backgrounds(std::uint64_t total, std::uint64_t cap, std::uint64_t seed,
                                              bool& sampled) {
    sampled = cap > 0 && total > cap;
    if (!sampled) {
        std::vector<std::uint64_t> all(total);
        for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
        return all;
    }
    Rng rng(seed);
    return sample_without_replacement(total, cap, rng);
}

double stdev_of(std::span<const double> x) {
    return x.size() < 2 ? 0.0 : std::sqrt(stats::variance(x));
}

}  // namespace

std::vector<MutationEffect> mutation_effects(const Landscape& l, std::size_t option, const EffectParams& params) {
    const auto& space = l.space();
    if (option >= space.option_count()) {
        throw ValidationError("unknown option index " + std::to_string(option));
    }
    const double range = fitness_range(l);
    const std::uint64_t total = space.cardinality() / space.level_count(option);
    bool sampled = false;
    const auto backgrounds =
        choose_backgrounds(total, params.background_cap, derive_seed(params.seed, option), sampled);
    const std::uint64_t stride = space.stride(option);
    const std::size_t bins = std::max<std::size_t>(1, params.histogram_bins);

    std::vector<MutationEffect> out;
    for (const auto& tr : option_transitions(space.option(option))) {
        MutationEffect e;
        e.option = option;
        e.from_level = tr.from_level;
        e.to_level = tr.to_level;
        e.background_total = total;
        e.sampled = sampled;
        e.histogram.assign(bins, 0);
        std::vector<double> raw;
        raw.reserve(backgrounds.size());
        for (const auto b : backgrounds) {
            const ConfigId base = insert_zero_digit(space, b, option);
            const ConfigId from = base + tr.from_level * stride;
            const ConfigId to = base + tr.to_level * stride;
            const auto fu = l.try_fitness(from);
            const auto fv = l.try_fitness(to);
            if (!fu || !fv) continue;
            raw.push_back(l.orient(*fv) - l.orient(*fu));
        }
        const double coverage = backgrounds.empty() ? 0.0 : static_cast<double>(raw.size()) / backgrounds.size();
        if (raw.empty() || coverage < params.min_coverage) {
            throw PreconditionError("effects requires a complete landscape (option '" + space.option(option).name +
                                    "' transition coverage " + std::to_string(coverage * 100.0) + "% < " +
                                    std::to_string(params.min_coverage * 100.0) + "%)");
        }
        e.background_count = raw.size();
        std::size_t pos = 0, neg = 0, zero = 0;
        e.deltas.resize(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const double d = raw[i] / range;
            e.deltas[i] = d;
            if (raw[i] > 0.0) {
                ++pos;
            } else if (raw[i] < 0.0) {
                ++neg;
            } else {
                ++zero;
            }
            const double scaled = (std::clamp(d, -1.0, 1.0) + 1.0) / 2.0 * static_cast<double>(bins);
            const auto bin = std::min(bins - 1, static_cast<std::size_t>(scaled));
            ++e.histogram[bin];
        }
        const double n = static_cast<double>(raw.size());
        e.beneficial = pos / n;
        e.detrimental = neg / n;
        e.neutral = zero / n;
        e.mean_raw_delta = stats::mean(raw);
        e.mean_delta = stats::mean(e.deltas);
        e.stdev_delta = stdev_of(e.deltas);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<double> ImportanceVector::values() const {
    std::vector<double> v;
    v.reserve(options.size());
    for (const auto& o : options) v.push_back(o.mean_abs_effect);
    return v;
}

ImportanceVector importance(const Landscape& l, const EffectParams& params, unsigned threads) {
    const auto& space = l.space();
    const std::size_t n = space.option_count();
    ImportanceVector out;
    out.alpha = params.alpha;
    out.corrected_alpha = params.alpha / static_cast<double>(n);
    out.effect_threshold = params.effect_threshold;
    out.options.resize(n);
    parallel_chunks(n, threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        for (std::uint64_t k = begin; k < end; ++k) {
            auto& imp = out.options[k];
            imp.name = space.option(k).name;
            std::vector<double> signed_d;
            for (const auto& e : mutation_effects(l, k, params)) {
                signed_d.insert(signed_d.end(), e.deltas.begin(), e.deltas.end());
            }
            std::vector<double> abs_d(signed_d.size());
            std::transform(signed_d.begin(), signed_d.end(), abs_d.begin(), [](double d) { return std::abs(d); });
            imp.samples = signed_d.size();
            imp.mean_abs_effect = stats::mean(abs_d);
            imp.mean_effect = stats::mean(signed_d);
            imp.p_value = signed_d.size() >= 2 ? stats::one_sample_t_test(signed_d) : 1.0;
            imp.significant = imp.p_value < out.corrected_alpha;
            imp.above_threshold = imp.mean_abs_effect > params.effect_threshold;
        }
    });
    return out;
}

const PairInteraction& InteractionMatrix::at(std::size_t a, std::size_t b) const {
    if (a == b || a >= option_count || b >= option_count) {
        throw ValidationError("interaction matrix has no diagonal or out-of-range entries");
    }
    const std::size_t i = std::min(a, b);
    const std::size_t j = std::max(a, b);
    // Row-major upper triangle offset.
    const std::size_t idx = i * option_count - i * (i + 1) / 2 + (j - i - 1);
    return pairs.at(idx);
}

std::vector<double> InteractionMatrix::upper_triangle() const {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(std::abs(p.mean) > kInteractionNoise ? p.mean : 0.0);
    return v;
}

InteractionMatrix pairwise_interactions(const Landscape& l, const EffectParams& params, unsigned threads) {
    l.require_complete("interactions");
    const auto& space = l.space();
    const std::size_t n = space.option_count();
    const double range = fitness_range(l);
    const auto dense = l.dense();
    const bool maximize = l.objective() == Objective::maximize;
    auto o = [&](ConfigId id) { return maximize ? dense[id] : -dense[id]; };

    InteractionMatrix out;
    out.option_count = n;
    out.alpha = params.alpha;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairInteraction p;
            p.i = i;
            p.j = j;
            out.pairs.push_back(p);
        }
    }
    out.corrected_alpha = out.pairs.empty() ? params.alpha : params.alpha / static_cast<double>(out.pairs.size());

    parallel_chunks(out.pairs.size(), threads, [&](std::uint64_t begin, std::uint64_t end, std::size_t) {
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            auto& p = out.pairs[idx];
            const std::size_t i = p.i, j = p.j;
            const std::uint64_t total = space.cardinality() / (space.level_count(i) * space.level_count(j));
            bool sampled = false;
            const auto backgrounds =
                choose_backgrounds(total, params.background_cap, derive_seed(params.seed, n + idx), sampled);
            const auto ti = option_transitions(space.option(i));
            const auto tj = option_transitions(space.option(j));
            const std::uint64_t si = space.stride(i), sj = space.stride(j);
            std::vector<double> raw;
            raw.reserve(backgrounds.size() * ti.size() * tj.size());
            for (const auto& a : ti) {
                for (const auto& c : tj) {
                    for (const auto b : backgrounds) {
                        // i < j: insert the lower digit first.
                        const ConfigId base = insert_zero_digit(space, insert_zero_digit(space, b, i), j);
                        const ConfigId us = base + a.from_level * si + c.from_level * sj;
                        const ConfigId ut = base + a.from_level * si + c.to_level * sj;
                        const ConfigId vs = base + a.to_level * si + c.from_level * sj;
                        const ConfigId vt = base + a.to_level * si + c.to_level * sj;
                        raw.push_back(o(vt) - o(vs) - o(ut) + o(us));
                    }
                }
            }
            std::size_t pos = 0, neg = 0, zero = 0;
            std::vector<double> norm(raw.size()), snapped(raw.size());
            for (std::size_t k = 0; k < raw.size(); ++k) {
                norm[k] = raw[k] / range;
                snapped[k] = std::abs(norm[k]) <= kInteractionNoise ? 0.0 : norm[k];
                if (snapped[k] > 0.0) {
                    ++pos;
                } else if (snapped[k] < 0.0) {
                    ++neg;
                } else {
                    ++zero;
                }
            }
            const double cnt = static_cast<double>(raw.size());
            p.samples = raw.size();
            p.sampled = sampled;
            p.positive = pos / cnt;
            p.negative = neg / cnt;
            p.zero = zero / cnt;
            p.mean_raw = stats::mean(raw);
            p.mean = stats::mean(norm);
            p.stdev = stdev_of(norm);
            p.p_value = raw.size() >= 2 ? stats::one_sample_t_test(snapped) : (snapped[0] == 0.0 ? 1.0 : 0.0);
            p.significant = p.p_value < out.corrected_alpha;
        }
    });
    return out;
}

double min_effect_coverage(const Landscape& l) {
    if (l.complete()) return 1.0;
    const auto& space = l.space();
    double worst = 1.0;
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        const std::uint64_t total = space.cardinality() / space.level_count(k);
        for (const auto& tr : option_transitions(space.option(k))) {
            std::uint64_t covered = 0;
            for (std::uint64_t b = 0; b < total; ++b) {
                const ConfigId base = insert_zero_digit(space, b, k);
                if (l.has(base + tr.from_level * space.stride(k)) && l.has(base + tr.to_level * space.stride(k))) {
                    ++covered;
                }
            }
            worst = std::min(worst, static_cast<double>(covered) / static_cast<double>(total));
        }
    }
    return worst;
}

}  // namespace confla
