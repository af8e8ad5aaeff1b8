#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confla/search.hpp"
#include "confla/synthetic.hpp"
#include "oracles.hpp"

using namespace confla;

namespace {

class Copy : public Predictor {
public:
    explicit Copy(const Landscape& l) : l_(l) {}
    double predict(ConfigId id) const override { return l_.fitness(id); }

private:
    const Landscape& l_;
};

double brute_percentile(const Landscape& l, ConfigId id) {
    std::uint64_t better = 0;
    for (ConfigId x = 0; x < l.space().cardinality(); ++x) better += oracle::oriented(l, x) > oracle::oriented(l, id);
    return static_cast<double>(better) / static_cast<double>(l.space().cardinality());
}

bool same_steps(const Trajectory& a, const Trajectory& b) {
    if (a.steps.size() != b.steps.size()) return false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        if (a.steps[i].id != b.steps[i].id || a.steps[i].oracle_fitness != b.steps[i].oracle_fitness ||
            a.steps[i].iteration != b.steps[i].iteration) {
            return false;
        }
    }
    return a.final_id == b.final_id && a.accepted == b.accepted;
}

}  // namespace

TEST_CASE("hill climbing examples") {
    const auto l = generate_additive(5, std::nullopt, 1);
    const auto opt = global_optimum(l).id;
    const auto t = hill_climb(l, 0, SearchStrategy::best_improvement, 0);
    CHECK(t.final_id == opt);
    CHECK(t.steps.size() == 6);
    CHECK(t.iterations == 5);
    CHECK(t.termination == "local_optimum");

    const auto fixed = hill_climb(l, opt, SearchStrategy::best_improvement, 0);
    CHECK(fixed.steps.size() == 1);
    CHECK(fixed.final_id == opt);

    CHECK_THROWS_AS(hill_climb(l, 32, SearchStrategy::best_improvement, 0), ValidationError);

    const Landscape flat(ConfigSpace::binary(3), std::vector<double>(8, 1.0));
    const auto p = hill_climb(flat, 5, SearchStrategy::first_improvement, 0);
    CHECK(p.steps.size() == 1);
    CHECK(p.termination == "plateau");
}

TEST_CASE("hill climbing endpoints agree with basin assignment") {
    const auto l = generate_nk({10, 3, NKNeighborModel::adjacent, 2});
    for (auto strategy : {SearchStrategy::best_improvement, SearchStrategy::first_improvement}) {
        const auto basins = assign_basins(l, strategy, 9);
        for (ConfigId start = 0; start < 1024; ++start) {
            const auto t = hill_climb(l, start, strategy, 9);
            CHECK(t.final_id == basins.attractor[start]);
            CHECK(t.steps.size() <= 1024);
            for (std::size_t i = 1; i < t.steps.size(); ++i) {
                CHECK(t.steps[i].oracle_fitness > t.steps[i - 1].oracle_fitness);
                CHECK(l.space().distance(t.steps[i].id, t.steps[i - 1].id) == 1);
            }
        }
        const auto bo = oracle::best_improvement_basins(l);
        if (strategy == SearchStrategy::best_improvement) {
            for (ConfigId start = 0; start < 1024; ++start) {
                CHECK(hill_climb(l, start, strategy, 9).iterations == bo.steps[start]);
            }
        }
    }
}

TEST_CASE("property: hill climbing on random spaces stops at a local optimum or plateau") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = oracle::random_space(rng, 500);
        const auto l = oracle::random_landscape(s, rng, trial % 2 == 0);
        const oracle::Shape shape(s);
        const auto optima = oracle::local_optima(l);
        for (int r = 0; r < 10; ++r) {
            const ConfigId start = rng.below(s.cardinality());
            const auto strategy = r % 2 ? SearchStrategy::first_improvement : SearchStrategy::best_improvement;
            const auto t = hill_climb(l, start, strategy, trial);
            const auto end = t.final_id;
            bool strict = true, tie = false;
            for (auto nb : shape.neighbors(end)) {
                strict = strict && oracle::oriented(l, nb) < oracle::oriented(l, end);
                tie = tie || oracle::oriented(l, nb) == oracle::oriented(l, end);
            }
            CHECK(strict == (t.termination == "local_optimum"));
            for (auto nb : shape.neighbors(end)) CHECK(oracle::oriented(l, nb) <= oracle::oriented(l, end));
            CHECK(tie == (t.termination == "plateau"));
            CHECK(strict == std::binary_search(optima.begin(), optima.end(), end));
        }
    }
}

TEST_CASE("simulated annealing finds the optimum of an additive landscape") {
    const auto l = generate_additive(10, std::nullopt, 4);
    const auto oracle_fn = FitnessOracle::from_landscape(l);
    const auto opt = global_optimum(l).id;
    std::vector<Trajectory> runs;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SAParams p;
        p.iterations = 5000;
        p.seed = seed;
        p.log_every = 100;
        runs.push_back(simulated_annealing(oracle_fn, l.space(), p, &l));
        hits += runs.back().final_id == opt;
    }
    CHECK(hits >= 95);
    const auto summary = summarize_runs(runs, l);
    CHECK(summary.runs == 100);
    CHECK(summary.global_hit_rate == hits / 100.0);
    std::vector<double> finals;
    for (const auto& r : runs) finals.push_back(l.fitness(r.final_id));
    const double mean = std::accumulate(finals.begin(), finals.end(), 0.0) / 100.0;
    double ss = 0;
    for (double f : finals) ss += (f - mean) * (f - mean);
    CHECK(summary.coefficient_of_variation == doctest::Approx(std::sqrt(ss / 100.0) / std::abs(mean)).epsilon(1e-9));
}

TEST_CASE("simulated annealing is seed-deterministic and logs consistently") {
    const auto l = generate_nk({10, 4, NKNeighborModel::random, 5});
    const auto o = FitnessOracle::from_landscape(l);
    SAParams p;
    p.iterations = 2000;
    p.seed = 17;
    const auto a = simulated_annealing(o, l.space(), p, &l);
    const auto b = simulated_annealing(o, l.space(), p, &l);
    CHECK(same_steps(a, b));
    p.seed = 18;
    CHECK_FALSE(same_steps(a, simulated_annealing(o, l.space(), p, &l)));

    REQUIRE(a.steps.size() == 2001);
    CHECK(a.scale == doctest::Approx(oracle::fitness_range(l)));
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        const auto& s = a.steps[i];
        CHECK(s.iteration == i);
        REQUIRE(s.true_fitness.has_value());
        CHECK(*s.true_fitness == l.fitness(s.id));
        CHECK(s.oracle_fitness == l.fitness(s.id));
        if (i > 0) {
            CHECK(s.best_so_far >= a.steps[i - 1].best_so_far);
            CHECK(l.space().distance(s.id, a.steps[i - 1].id) <= 1);
        }
    }
    CHECK(a.steps.back().best_so_far == l.fitness(a.best_id));

    p.log_every = 300;
    p.seed = 17;
    const auto d = simulated_annealing(o, l.space(), p, &l);
    CHECK(d.decimated);
    CHECK(d.steps.size() == 8);
    CHECK(d.steps.back().iteration == 2000);
    CHECK(d.final_id == a.final_id);
    CHECK(d.accepted == a.accepted);
}

TEST_CASE("simulated annealing without worse moves never loses fitness") {
    Rng rng(72);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_space(rng, 800);
        const auto l = oracle::random_landscape(s, rng, trial % 2 == 0);
        const auto o = FitnessOracle::from_landscape(l);
        SAParams p;
        p.initial_temperature = 1e-300;
        p.cooling_rate = 0.5;
        p.iterations = 500;
        p.seed = trial;
        const auto t = simulated_annealing(o, s, p);
        for (std::size_t i = 1; i < t.steps.size(); ++i) {
            CHECK(oracle::oriented(l, t.steps[i].id) >= oracle::oriented(l, t.steps[i - 1].id));
        }
        CHECK(oracle::oriented(l, t.final_id) >= oracle::oriented(l, t.steps.front().id));
    }
}

TEST_CASE("metropolis acceptance probability") {
    // Start on the better of two configurations; the only proposal is worse by
    // one full fitness range, so exp(-1 / T0) = 1/2 for T0 = 1/ln 2.
    const Landscape l(ConfigSpace::binary(1), std::vector<double>{0.0, 3.0});
    const auto o = FitnessOracle::from_landscape(l);
    CHECK(o.scale == 3.0);
    const int runs = 4000;
    for (bool normalize : {true, false}) {
        int moved = 0;
        for (int seed = 0; seed < runs; ++seed) {
            SAParams p;
            p.initial = InitialConfig::given;
            p.start = 1;
            p.iterations = 1;
            p.seed = static_cast<std::uint64_t>(seed);
            p.normalize = normalize;
            p.initial_temperature = (normalize ? 1.0 : 3.0) / std::log(2.0);
            moved += simulated_annealing(o, l.space(), p).final_id == 0;
        }
        const double sigma = std::sqrt(runs * 0.25);
        CHECK(std::abs(moved - runs / 2.0) <= 5 * sigma);
    }
}

TEST_CASE("surrogate oracles") {
    const auto l = generate_nk({9, 2, NKNeighborModel::adjacent, 6});
    const Copy copy(l);
    const auto truth = FitnessOracle::from_landscape(l);
    const auto surrogate = FitnessOracle::from_predictor(copy, l, "copy");
    CHECK(surrogate.scale == truth.scale);
    SAParams p;
    p.iterations = 1500;
    p.seed = 3;
    const auto a = simulated_annealing(truth, l.space(), p, &l);
    const auto b = simulated_annealing(surrogate, l.space(), p, &l);
    CHECK(same_steps(a, b));
    CHECK(b.oracle == "copy");

    const auto fit = train_tree(l, 0.3, 4, 2);
    const auto model = FitnessOracle::from_predictor(fit.tree, l, "tree");
    const auto t = simulated_annealing(model, l.space(), p, &l);
    for (const auto& s : t.steps) {
        CHECK(s.oracle_fitness == fit.tree.predict(s.id));
        CHECK(*s.true_fitness == l.fitness(s.id));
    }

    std::vector<std::pair<ConfigId, double>> few{{0, 1.0}, {1, 2.0}};
    const PredictionTable table(few);
    const auto partial = FitnessOracle::from_table(table, Objective::maximize, "table");
    p.initial = InitialConfig::given;
    p.start = 0;
    CHECK_THROWS_AS(simulated_annealing(partial, l.space(), p), PreconditionError);
}

TEST_CASE("simulated annealing validation") {
    const auto l = generate_additive(4, std::nullopt, 1);
    const auto o = FitnessOracle::from_landscape(l);
    SAParams p;
    p.cooling_rate = 1.0;
    CHECK_THROWS_AS(simulated_annealing(o, l.space(), p), ValidationError);
    p.cooling_rate = 0.0;
    CHECK_THROWS_AS(simulated_annealing(o, l.space(), p), ValidationError);
    p.cooling_rate = 0.9;
    p.initial_temperature = 0.0;
    CHECK_THROWS_AS(simulated_annealing(o, l.space(), p), ValidationError);
    p.initial_temperature = 1.0;
    p.initial = InitialConfig::given;
    p.start = 16;
    CHECK_THROWS_AS(simulated_annealing(o, l.space(), p), ValidationError);
    const auto other = generate_additive(5, std::nullopt, 1);
    p.start = 0;
    CHECK_THROWS_AS(simulated_annealing(o, l.space(), p, &other), ValidationError);
}

TEST_CASE("warm start") {
    const auto a = generate_nk({10, 5, NKNeighborModel::adjacent, 1});
    const auto same = warm_start_pick(a, a, 1.0 / 1024.0, 3);
    CHECK(same.id == global_optimum(a).id);
    CHECK(same.pool == 1);
    CHECK(same.target_percentile == 0.0);
    CHECK_THROWS_AS(warm_start_pick(a, a, 0.0005, 3), ValidationError);

    std::vector<double> f(16), g(16);
    for (std::size_t i = 0; i < 16; ++i) {
        f[i] = static_cast<double>(i);
        g[i] = -static_cast<double>(i);
    }
    const Landscape lf(ConfigSpace::binary(4), f), lg(ConfigSpace::binary(4), g);
    const auto d = warm_start_pick(lf, lg, 0.25, 1);
    CHECK(d.pool == 4);
    CHECK(d.id >= 12);
    CHECK(d.target_percentile > 0.25);

    const auto b = generate_nk({10, 5, NKNeighborModel::adjacent, 2});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = warm_start_pick(a, b, 0.01, seed);
        CHECK(w.pool == 11);
        CHECK(w.source_percentile == brute_percentile(a, w.id));
        CHECK(w.target_percentile == brute_percentile(b, w.id));
        CHECK(w.source_percentile <= 0.01);
        CHECK(warm_start_pick(a, b, 0.01, seed).id == w.id);
    }
}
