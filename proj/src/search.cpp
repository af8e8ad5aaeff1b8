#include "confla/search.hpp"

#include <algorithm>
#include <cmath>

#include "confla/compare.hpp"
#include "confla/error.hpp"
#include "confla/random.hpp"

namespace confla {

namespace {

double range_of(const std::vector<double>& v) {
    if (v.empty()) return 1.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > *lo ? *hi - *lo : 1.0;
}

}  // namespace

FitnessOracle FitnessOracle::from_landscape(const Landscape& l) {
    FitnessOracle o;
    o.name = "true";
    o.objective = l.objective();
    o.evaluate = [&l](ConfigId id) { return l.fitness(id); };
    o.scale = range_of(l.values());
    return o;
}

FitnessOracle FitnessOracle::from_predictor(const Predictor& model, const Landscape& l, std::string name) {
    FitnessOracle o;
    o.name = std::move(name);
    o.objective = l.objective();
    o.evaluate = [&model](ConfigId id) { return model.predict(id); };
    o.scale = range_of(predict_all(model, l));
    return o;
}

FitnessOracle FitnessOracle::from_table(const PredictionTable& table, Objective objective, std::string name) {
    FitnessOracle o;
    o.name = std::move(name);
    o.objective = objective;
    o.evaluate = [&table](ConfigId id) { return table.predict(id); };
    std::vector<double> v;
    v.reserve(table.size());
    for (const auto& e : table.entries()) v.push_back(e.second);
    o.scale = range_of(v);
    return o;
}

Trajectory hill_climb(const Landscape& l, ConfigId start, SearchStrategy strategy, std::uint64_t seed) {
    const auto& space = l.space();
    if (!space.contains(start)) {
        throw ValidationError("start configuration " + std::to_string(start) + " is outside the space");
    }
    Trajectory t;
    t.oracle = "true";
    t.normalized = false;
    ConfigId cur = start;
    double best = l.fitness(cur);
    t.best_id = cur;
    for (std::uint64_t it = 0;; ++it) {
        const double f = l.fitness(cur);
        if (l.better(f, best)) {
            best = f;
            t.best_id = cur;
        }
        t.steps.push_back({it, cur, f, f, best});
        const ConfigId next = improving_move(l, cur, strategy, seed);
        if (next == cur) {
            bool tie = false;
            space.for_each_neighbor(cur, [&](ConfigId nb) {
                if (const auto g = l.try_fitness(nb); g && *g == f) tie = true;
            });
            t.termination = tie ? "plateau" : "local_optimum";
            t.iterations = it;
            break;
        }
        cur = next;
        ++t.accepted;
    }
    t.final_id = cur;
    return t;
}

Trajectory simulated_annealing(const FitnessOracle& oracle, const ConfigSpace& space, const SAParams& params,
                               const Landscape* truth) {
    if (!(params.cooling_rate > 0.0 && params.cooling_rate < 1.0)) {
        throw ValidationError("cooling rate must be in (0, 1)");
    }
    if (!(params.initial_temperature > 0.0)) throw ValidationError("initial temperature must be positive");
    if (!oracle.evaluate) throw ValidationError("fitness oracle is empty");
    if (truth && !(truth->space() == space)) throw ValidationError("true landscape uses a different space");
    const std::uint64_t log_every = std::max<std::uint64_t>(1, params.log_every);

    Rng rng(params.seed);
    ConfigId cur = 0;
    if (params.initial == InitialConfig::given) {
        if (!space.contains(params.start)) {
            throw ValidationError("start configuration " + std::to_string(params.start) + " is outside the space");
        }
        cur = params.start;
    } else {
        cur = rng.below(space.cardinality());
    }

    Trajectory t;
    t.oracle = oracle.name;
    t.normalized = params.normalize;
    t.scale = params.normalize ? oracle.scale : 1.0;
    t.log_every = log_every;
    t.decimated = log_every > 1;
    t.termination = "iterations";
    t.iterations = params.iterations;

    const bool maximize = oracle.objective == Objective::maximize;
    auto orient = [&](double v) { return maximize ? v : -v; };
    double f_cur = oracle.evaluate(cur);
    std::optional<double> truth_cur;
    if (truth) truth_cur = truth->fitness(cur);
    double best = truth_cur.value_or(f_cur);
    t.best_id = cur;

    auto log = [&](std::uint64_t it) {
        t.steps.push_back({it, cur, f_cur, truth_cur, best});
    };
    log(0);

    double temperature = params.initial_temperature;
    std::vector<ConfigId> nbs;
    for (std::uint64_t it = 1; it <= params.iterations; ++it) {
        nbs.clear();
        space.for_each_neighbor(cur, [&](ConfigId nb) { nbs.push_back(nb); });
        const ConfigId cand = nbs[rng.below(nbs.size())];
        const double f_cand = oracle.evaluate(cand);
        const double delta = orient(f_cand) - orient(f_cur);
        bool accept = delta >= 0.0;
        if (!accept) {
            const double p = std::exp(-std::abs(delta) / t.scale / temperature);
            accept = rng.uniform01() < p;
        }
        if (accept) {
            cur = cand;
            f_cur = f_cand;
            if (truth) truth_cur = truth->fitness(cur);
            ++t.accepted;
            const double v = truth_cur.value_or(f_cur);
            if (orient(v) > orient(best)) {
                best = v;
                t.best_id = cur;
            }
        }
        temperature *= params.cooling_rate;
        if (it % log_every == 0 || it == params.iterations) log(it);
    }
    t.final_id = cur;
    return t;
}

WarmStart warm_start_pick(const Landscape& source, const Landscape& target, double q, std::uint64_t seed) {
    require_same_space(source, target);
    source.require_complete("warm start");
    target.require_complete("warm start");
    const std::uint64_t n = source.size();
    if (!(q > 0.0 && q <= 1.0) || q * static_cast<double>(n) < 1.0 - 1e-9) {
        throw ValidationError("warm-start pool is empty (q * N < 1)");
    }
    const auto pool = top_ids(source, top_count(q, n));
    Rng rng(seed);
    WarmStart out;
    out.pool = pool.size();
    out.id = pool[rng.below(pool.size())];
    out.source_percentile = percentiles(source)[out.id];
    out.target_percentile = percentiles(target)[out.id];
    return out;
}

BatchSummary summarize_runs(const std::vector<Trajectory>& runs, const Landscape& truth) {
    if (runs.empty()) throw ValidationError("no runs to summarize");
    const auto best = global_optimum(truth);
    std::vector<double> finals;
    std::uint64_t hits = 0;
    for (const auto& r : runs) {
        const double f = truth.fitness(r.final_id);
        finals.push_back(f);
        if (f == best.fitness) ++hits;
    }
    BatchSummary out;
    out.runs = runs.size();
    out.final_fitness = stats::describe(finals);
    out.coefficient_of_variation =
        out.final_fitness.mean != 0.0 ? out.final_fitness.stdev / std::abs(out.final_fitness.mean) : 0.0;
    out.global_hit_rate = static_cast<double>(hits) / static_cast<double>(runs.size());
    return out;
}

}  // namespace confla
