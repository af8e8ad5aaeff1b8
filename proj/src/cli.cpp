#include "confla/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "confla/compare.hpp"
#include "confla/effects.hpp"
#include "confla/error.hpp"
#include "confla/export.hpp"
#include "confla/metrics.hpp"
#include "confla/numeric_text.hpp"
#include "confla/random.hpp"
#include "confla/report.hpp"
#include "confla/search.hpp"
#include "confla/surrogate.hpp"
#include "confla/synthetic.hpp"

namespace confla {

namespace {

struct Globals {
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 1;
    bool quiet = false;
};

struct LandscapeArgs {
    std::string space;
    std::string data;
    std::string column = "fitness";
};

void add_landscape_args(CLI::App* sub, LandscapeArgs& a) {
    sub->add_option("--space", a.space, "configuration space JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--data", a.data, "measurement table (CSV, or JSON when the name ends in .json)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--fitness-column", a.column, "name of the fitness column")->capture_default_str();
}

Landscape load_landscape(const LandscapeArgs& a, ReportBuilder* report, const std::string& role = "data") {
    const auto space = ConfigSpace::load(a.space);
    auto l = load_table(space, a.data, a.column);
    if (report) {
        report->add_input("space", a.space);
        report->add_input(role, a.data);
    }
    return l;
}

/// The environment override when set, else `fallback`.
std::uint64_t env_budget(const char* name, std::uint64_t fallback, ReportBuilder* report) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    std::uint64_t v = 0;
    const std::string_view s(raw);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
        throw ValidationError(std::string("environment variable ") + name + " must be a positive integer, got '" +
                              std::string(s) + "'");
    }
    if (report) report->set_environment(name, std::string(s));
    return v;
}

void require_seed(const Globals& g, const std::string& what) {
    if (!g.seed_given) throw ValidationError("--seed is required for " + what);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    f << text;
    if (!f) throw ValidationError("failed writing " + path);
}

SearchStrategy parse_strategy(const std::string& s) {
    if (s == "best") return SearchStrategy::best_improvement;
    if (s == "first") return SearchStrategy::first_improvement;
    throw ValidationError("unknown strategy '" + s + "' (expected best or first)");
}

void note(const Globals& g, std::ostream& err, const std::string& msg) {
    if (!g.quiet) err << msg << '\n';
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    std::string model = "adjacent";
    std::string out;
    std::string space_out;
    std::vector<double> weights;
};

void write_generated(const Landscape& l, const GenerateArgs& a, const Globals& g, std::ostream& out,
                     std::ostream& err) {
    emit(l.space().to_json_text(), a.space_out, out);
    emit(to_csv(l, "fitness"), a.out, out);
    note(g, err, "wrote " + std::to_string(l.size()) + " configurations to " + a.out + " and space to " + a.space_out);
}

int cmd_generate_nk(const GenerateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    require_seed(g, "generate nk");
    NKSpec spec;
    spec.n = a.n;
    spec.k = a.k;
    if (a.model == "adjacent") {
        spec.model = NKNeighborModel::adjacent;
    } else if (a.model == "random") {
        spec.model = NKNeighborModel::random;
    } else {
        throw ValidationError("unknown NK neighbor model '" + a.model + "' (expected adjacent or random)");
    }
    spec.seed = g.seed;
    write_generated(generate_nk(spec), a, g, out, err);
    return kExitOk;
}

int cmd_generate_additive(const GenerateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    std::optional<std::vector<double>> weights;
    if (!a.weights.empty()) {
        weights = a.weights;
    } else {
        require_seed(g, "generate additive without --weights");
    }
    write_generated(generate_additive(a.n, weights, g.seed), a, g, out, err);
    return kExitOk;
}

// ---- build ---------------------------------------------------------------

struct BuildArgs {
    LandscapeArgs in;
    std::string out;
    std::string report_out;
};

int cmd_build(const BuildArgs& a, const Globals&, std::ostream& out) {
    ReportBuilder report("build");
    const auto l = load_landscape(a.in, &report);
    const auto& space = l.space();
    report.section("landscape") = {{"options", space.option_count()},
                                   {"cardinality", space.cardinality()},
                                   {"stored", l.size()},
                                   {"complete", l.complete()},
                                   {"coverage", static_cast<double>(l.size()) / static_cast<double>(space.cardinality())},
                                   {"rows", l.meta().rows},
                                   {"duplicates", l.meta().duplicates},
                                   {"objective", std::string(to_string(space.objective()))},
                                   {"diameter", space.diameter()},
                                   {"radius", space.radius()}};
    if (l.meta().duplicates > 0) {
        report.add_warning(warning("duplicates_averaged", "build",
                                   std::to_string(l.meta().duplicates) + " duplicate rows were averaged"));
    }
    if (!a.out.empty()) {
        const bool as_json = a.out.size() >= 5 && a.out.substr(a.out.size() - 5) == ".json";
        emit(as_json ? to_json_rows(l, a.in.column) : to_csv(l, a.in.column), a.out, out);
    }
    emit(report.text(), a.report_out, out);
    return kExitOk;
}

// ---- analyze / effects -----------------------------------------------------

const std::vector<std::string> kMetricOrder = {"distribution", "prominent",       "local_optima",
                                               "distance_to_global", "basins",   "lon",
                                               "autocorrelation",    "effects",  "interactions"};

struct AnalyzeArgs {
    LandscapeArgs in;
    std::vector<std::string> metrics;
    double q = 0.01;
    std::string strategy = "best";
    std::optional<std::uint64_t> walks, walk_length, lon_attempts, background_cap, pair_cap;
    std::size_t max_lag = 10;
    std::size_t lon_strength = 2;
    double alpha = 0.05;
    double effect_threshold = 0.05;
    std::uint64_t distance_sample_cap = 0;
    std::string out;
    std::string option;     // effects command only
    bool interactions = false;  // effects command only
    std::string dot_out;        // effects command only
};

struct Budgets {
    AutocorrelationParams walk;
    LonParams lon;
    EffectParams effects;
    std::uint64_t pair_cap = 1000000;
};

Budgets resolve_budgets(const AnalyzeArgs& a, const Globals& g, ReportBuilder& report) {
    Budgets b;
    b.walk.walks = a.walks.value_or(env_budget("CONFLA_WALKS", 200, &report));
    b.walk.walk_length = a.walk_length.value_or(env_budget("CONFLA_WALK_LENGTH", 10000, &report));
    b.walk.max_lag = a.max_lag;
    b.walk.seed = derive_seed(g.seed, "autocorrelation");
    b.lon.attempts = a.lon_attempts.value_or(env_budget("CONFLA_LON_ATTEMPTS", 100, &report));
    b.lon.perturbation_strength = a.lon_strength;
    b.lon.strategy = parse_strategy(a.strategy);
    b.lon.seed = derive_seed(g.seed, "lon");
    b.effects.background_cap = a.background_cap.value_or(env_budget("CONFLA_BACKGROUND_CAP", 1u << 20, &report));
    b.effects.seed = derive_seed(g.seed, "effects");
    b.effects.alpha = a.alpha;
    b.effects.effect_threshold = a.effect_threshold;
    b.pair_cap = a.pair_cap.value_or(env_budget("CONFLA_PAIR_SAMPLE_CAP", 1000000, &report));
    return b;
}

bool effects_subsample(const ConfigSpace& space, std::uint64_t cap, bool pairs) {
    for (std::size_t i = 0; i < space.option_count(); ++i) {
        if (!pairs && space.cardinality() / space.level_count(i) > cap) return true;
        for (std::size_t j = i + 1; pairs && j < space.option_count(); ++j) {
            if (space.cardinality() / (space.level_count(i) * space.level_count(j)) > cap) return true;
        }
    }
    return false;
}

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    std::set<std::string> selected, named;
    for (const auto& m : a.metrics) {
        if (m == "all") {
            selected.insert(kMetricOrder.begin(), kMetricOrder.end());
        } else if (std::find(kMetricOrder.begin(), kMetricOrder.end(), m) != kMetricOrder.end()) {
            selected.insert(m);
            named.insert(m);
        } else {
            throw ValidationError("unknown metric '" + m + "'");
        }
    }
    if (selected.empty()) selected.insert(kMetricOrder.begin(), kMetricOrder.end());
    auto on = [&](const std::string& m) { return selected.count(m) > 0; };

    ReportBuilder report("analyze");
    const auto l = load_landscape(a.in, &report);
    const auto& space = l.space();
    const auto strategy = parse_strategy(a.strategy);
    auto budgets = resolve_budgets(a, g, report);
    std::vector<json> warnings;
    if (on("prominent") && !named.count("prominent") && top_count(a.q, l.size()) < 2) {
        selected.erase("prominent");
        warnings.push_back(warning("metric_skipped", "prominent",
                                   "q * N < 2 leaves no member pairs; pass --metrics prominent with a larger --q"));
    }

    // Up-front checks so a failing run names every offending metric.
    if (!l.complete()) {
        std::vector<std::string> problems;
        const std::string detail = " (" + std::to_string(l.size()) + " of " + std::to_string(space.cardinality()) +
                                   " configurations present)";
        for (const auto& m : kMetricOrder) {
            if (!on(m)) continue;
            if (m == "distribution" || m == "prominent") continue;
            if (m == "effects" && min_effect_coverage(l) >= budgets.effects.min_coverage) continue;
            problems.push_back(m + " requires a complete landscape" + detail);
        }
        if (!problems.empty()) {
            std::string msg;
            for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "\n" : "") + problems[i];
            throw PreconditionError(msg);
        }
    }
    std::vector<std::string> stochastic;
    if (on("prominent")) stochastic.push_back("prominent");
    if (on("lon")) stochastic.push_back("lon");
    if (on("autocorrelation")) stochastic.push_back("autocorrelation");
    if (on("basins") && strategy == SearchStrategy::first_improvement) stochastic.push_back("basins (first)");
    if (on("distance_to_global") && a.distance_sample_cap > 0) stochastic.push_back("distance_to_global");
    if (on("effects") && effects_subsample(space, budgets.effects.background_cap, false)) {
        stochastic.push_back("effects (subsampled)");
    }
    if (on("interactions") && effects_subsample(space, budgets.effects.background_cap, true)) {
        stochastic.push_back("interactions (subsampled)");
    }
    if (!stochastic.empty() && !g.seed_given) {
        std::string list;
        for (const auto& s : stochastic) list += (list.empty() ? "" : ", ") + s;
        throw ValidationError("--seed is required for stochastic metrics: " + list);
    }
    if (g.seed_given) report.set_seed("master", g.seed);

    std::optional<LocalOptimaReport> optima;
    std::optional<BasinAssignment> basins;
    auto need_optima = [&] {
        if (!optima) optima = find_local_optima(l, g.threads);
    };
    auto need_basins = [&] {
        if (!basins) {
            const auto seed = derive_seed(g.seed, "basins");
            basins = assign_basins(l, strategy, seed, g.threads);
            if (strategy == SearchStrategy::first_improvement) report.set_seed("basins", seed);
        }
    };

    for (const auto& m : kMetricOrder) {
        if (!on(m)) continue;
        note(g, err, "analyze: " + m);
        json& sec = report.section(m);
        if (m == "distribution") {
            sec = {{"raw", to_json(fitness_distribution(l, false))},
                   {"normalized", to_json(fitness_distribution(l, true))},
                   {"stored", l.size()},
                   {"cardinality", space.cardinality()},
                   {"complete", l.complete()}};
        } else if (m == "prominent") {
            const auto seed = derive_seed(g.seed, "prominent");
            report.set_seed(m, seed);
            report.set_budget("pair_sample_cap", budgets.pair_cap);
            const auto p = prominent_region(l, a.q, budgets.pair_cap, seed);
            sec = to_json(p);
            if (!p.exact_pairs) {
                warnings.push_back(warning("pairs_sampled", m,
                                           "member pairs sampled (" + std::to_string(budgets.pair_cap) + " pairs)"));
            }
        } else if (m == "local_optima") {
            need_optima();
            sec = confla::to_json(*optima, &warnings);
        } else if (m == "distance_to_global") {
            need_optima();
            const auto seed = derive_seed(g.seed, "distance_to_global");
            if (a.distance_sample_cap > 0) report.set_seed(m, seed);
            const auto d = distance_to_global(l, *optima, a.distance_sample_cap, seed);
            sec = to_json(d);
            if (d.sampled) warnings.push_back(warning("optima_sampled", m, "local optima subsampled"));
        } else if (m == "basins") {
            need_basins();
            sec = confla::to_json(*basins, &warnings);
        } else if (m == "lon") {
            need_basins();
            report.set_seed(m, budgets.lon.seed);
            report.set_budget("lon_attempts", budgets.lon.attempts);
            report.set_budget("lon_perturbation_strength", budgets.lon.perturbation_strength);
            sec = to_json(build_lon(l, *basins, budgets.lon, g.threads));
        } else if (m == "autocorrelation") {
            report.set_seed(m, budgets.walk.seed);
            report.set_budget("walks", budgets.walk.walks);
            report.set_budget("walk_length", budgets.walk.walk_length);
            sec = to_json(autocorrelation(l, budgets.walk, g.threads));
        } else if (m == "effects") {
            report.set_budget("background_cap", budgets.effects.background_cap);
            json per_option = json::object();
            for (std::size_t k = 0; k < space.option_count(); ++k) {
                const auto effects = mutation_effects(l, k, budgets.effects);
                if (!effects.empty() && effects.front().sampled) {
                    warnings.push_back(warning("backgrounds_sampled", m,
                                               "option '" + space.option(k).name + "' backgrounds subsampled"));
                }
                per_option[space.option(k).name] = to_json(space, effects);
            }
            if (effects_subsample(space, budgets.effects.background_cap, false)) {
                report.set_seed(m, budgets.effects.seed);
            }
            sec = {{"mutations", per_option}, {"importance", to_json(importance(l, budgets.effects, g.threads))}};
        } else if (m == "interactions") {
            report.set_budget("background_cap", budgets.effects.background_cap);
            if (effects_subsample(space, budgets.effects.background_cap, true)) {
                report.set_seed(m, budgets.effects.seed);
                warnings.push_back(warning("backgrounds_sampled", m, "pair backgrounds subsampled"));
            }
            sec = to_json(space, pairwise_interactions(l, budgets.effects, g.threads));
        }
    }
    for (auto& w : warnings) report.add_warning(std::move(w));
    emit(report.text(), a.out, out);
    return kExitOk;
}

int cmd_effects(const AnalyzeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    ReportBuilder report("effects");
    const auto l = load_landscape(a.in, &report);
    const auto& space = l.space();
    auto budgets = resolve_budgets(a, g, report);
    const bool sub_main = effects_subsample(space, budgets.effects.background_cap, false);
    const bool sub_pairs = a.interactions && effects_subsample(space, budgets.effects.background_cap, true);
    if ((sub_main || sub_pairs) && !g.seed_given) {
        throw ValidationError("--seed is required: backgrounds exceed the cap and will be subsampled");
    }
    if (sub_main || sub_pairs) report.set_seed("effects", budgets.effects.seed);
    report.set_budget("background_cap", budgets.effects.background_cap);

    std::vector<std::size_t> options;
    if (!a.option.empty()) {
        const auto k = space.find_option(a.option);
        if (!k) throw ValidationError("unknown option '" + a.option + "'");
        options.push_back(*k);
    } else {
        for (std::size_t k = 0; k < space.option_count(); ++k) options.push_back(k);
    }
    json per_option = json::object();
    for (const auto k : options) {
        note(g, err, "effects: " + space.option(k).name);
        per_option[space.option(k).name] = to_json(space, mutation_effects(l, k, budgets.effects));
    }
    report.section("effects") = {{"mutations", per_option}};
    if (a.option.empty()) report.section("effects")["importance"] = to_json(importance(l, budgets.effects, g.threads));
    if (a.interactions) {
        note(g, err, "effects: interactions");
        const auto m = pairwise_interactions(l, budgets.effects, g.threads);
        report.section("interactions") = to_json(space, m);
        if (!a.dot_out.empty()) emit(export_interactions(space, m), a.dot_out, out);
    }
    emit(report.text(), a.out, out);
    return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
    std::string space;
    std::vector<std::string> data;
    std::string column = "fitness";
    double q = 0.1;
    std::uint64_t emd_cap = kDefaultEmdCap;
    bool no_consistency = false;
    std::optional<std::uint64_t> background_cap;
    std::string out;
};

int cmd_compare(const CompareArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.data.size() < 2) throw ValidationError("compare needs at least two landscapes");
    ReportBuilder report("compare");
    report.add_input("space", a.space);
    const auto space = ConfigSpace::load(a.space);
    std::vector<Landscape> ls;
    for (const auto& d : a.data) {
        ls.push_back(load_table(space, d, a.column));
        report.add_input("data", d);
        ls.back().require_complete("compare");
    }
    EffectParams ep;
    ep.background_cap = a.background_cap.value_or(env_budget("CONFLA_BACKGROUND_CAP", 1u << 20, &report));
    ep.seed = derive_seed(g.seed, "effects");
    const std::uint64_t emd_seed = derive_seed(g.seed, "local-optima-emd");
    if (!a.no_consistency && (effects_subsample(space, ep.background_cap, false) ||
                              effects_subsample(space, ep.background_cap, true))) {
        require_seed(g, "compare with subsampled effect backgrounds");
        report.set_seed("effects", ep.seed);
    }
    if (g.seed_given) report.set_seed("master", g.seed);
    report.set_budget("emd_cap", a.emd_cap);

    const std::size_t n = ls.size();
    std::vector<LocalOptimaReport> optima;
    std::vector<ImportanceVector> imps;
    std::vector<InteractionMatrix> inters;
    for (std::size_t i = 0; i < n; ++i) {
        note(g, err, "compare: landscape " + std::to_string(i));
        optima.push_back(find_local_optima(ls[i], g.threads));
        if (!a.no_consistency) {
            imps.push_back(importance(ls[i], ep, g.threads));
            inters.push_back(pairwise_interactions(ls[i], ep, g.threads));
        }
    }

    const std::vector<std::string> keys = {
        "pearson",          "spearman",          "jaccard_top",         "shake_up",
        "percentile_shift", "jaccard_local_optima", "emd_local_optima", "global_optimum_distance",
        "global_optimum_rank_shift", "importance_spearman", "interaction_spearman"};
    json matrices = json::object();
    for (const auto& k : keys) matrices[k] = json::array();
    for (auto& [k, m] : matrices.items()) {
        for (std::size_t i = 0; i < n; ++i) m.push_back(json(std::vector<json>(n, json(nullptr))));
    }
    auto set = [&](const std::string& k, std::size_t i, std::size_t j, json ij, json ji) {
        matrices[k][i][j] = std::move(ij);
        matrices[k][j][i] = std::move(ji);
    };
    json pairs = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& A = ls[i];
            const auto& B = ls[j];
            ComparisonReport r;
            r.correlation = fitness_correlation(A, B);
            r.top = top_region_overlap(A, B, a.q);
            const bool approx = optima[i].optima.size() > a.emd_cap || optima[j].optima.size() > a.emd_cap;
            if (approx) {
                require_seed(g, "compare when local optima exceed the EMD cap");
                report.set_seed("local-optima-emd", emd_seed);
            }
            r.optima = local_optima_similarity(space, optima[i].optima, optima[j].optima, a.emd_cap, emd_seed);
            if (r.optima.approximate) {
                report.add_warning(warning("emd_approximate", "emd_local_optima",
                                           "EMD for pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                               ") computed on subsamples of " + std::to_string(a.emd_cap)));
            }
            r.global = global_optimum_shift(A, B);
            if (!a.no_consistency) r.consistency = consistency(imps[i], imps[j], inters[i], inters[j]);

            json entry = to_json(r);
            entry["a"] = i;
            entry["b"] = j;
            pairs.push_back(entry);
            set("pearson", i, j, r.correlation.pearson, r.correlation.pearson);
            set("spearman", i, j, r.correlation.spearman, r.correlation.spearman);
            set("jaccard_top", i, j, r.top.jaccard, r.top.jaccard);
            set("shake_up", i, j, r.top.shake_up_ab, r.top.shake_up_ba);
            set("percentile_shift", i, j, r.top.percentile_shift_ab, r.top.percentile_shift_ba);
            set("jaccard_local_optima", i, j, r.optima.jaccard, r.optima.jaccard);
            set("emd_local_optima", i, j, r.optima.emd, r.optima.emd);
            set("global_optimum_distance", i, j, r.global.distance, r.global.distance);
            set("global_optimum_rank_shift", i, j, r.global.rank_shift_ab, r.global.rank_shift_ba);
            if (r.consistency) {
                set("importance_spearman", i, j, r.consistency->importance_spearman,
                    r.consistency->importance_spearman);
                const json x = r.consistency->interaction_spearman ? json(*r.consistency->interaction_spearman)
                                                                   : json(nullptr);
                set("interaction_spearman", i, j, x, x);
            }
        }
    }
    report.section("compare") = {{"landscapes", a.data}, {"q", a.q}, {"pairs", pairs}, {"matrices", matrices}};
    emit(report.text(), a.out, out);
    return kExitOk;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
    LandscapeArgs in;
    std::string algo = "sa";
    std::string strategy = "best";
    std::string oracle = "true";
    std::string warm_from;
    double warm_q = 0.01;
    std::size_t runs = 1;
    std::uint64_t iterations = 10000;
    double t0 = 1000.0;
    double alpha = 0.99;
    bool no_normalize = false;
    std::optional<std::uint64_t> start;
    std::uint64_t log_every = 1;
    std::string trajectory_out;
    bool steps_in_report = false;
    std::string out;
};

int cmd_optimize(const OptimizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    ReportBuilder report("optimize");
    const auto l = load_landscape(a.in, &report);
    const auto& space = l.space();
    if (a.runs == 0) throw ValidationError("--runs must be positive");
    if (a.algo != "hc" && a.algo != "sa") throw ValidationError("unknown algorithm '" + a.algo + "' (hc or sa)");
    const auto strategy = parse_strategy(a.strategy);
    const bool needs_seed = a.algo == "sa" || !a.start || !a.warm_from.empty() ||
                            strategy == SearchStrategy::first_improvement;
    if (needs_seed) require_seed(g, "optimize (random start, annealing or warm start)");
    if (g.seed_given) report.set_seed("master", g.seed);
    const std::uint64_t run_seed = derive_seed(g.seed, "optimize");
    const std::uint64_t warm_seed = derive_seed(g.seed, "warm-start");

    std::optional<PredictionTable> table;
    std::optional<Landscape> surrogate_landscape;
    FitnessOracle oracle = FitnessOracle::from_landscape(l);
    if (a.oracle != "true") {
        const std::string prefix = "surrogate:";
        if (a.oracle.rfind(prefix, 0) != 0) {
            throw ValidationError("--oracle must be 'true' or 'surrogate:<file.csv>'");
        }
        const std::string file = a.oracle.substr(prefix.size());
        table = PredictionTable::load(file);
        report.add_input("predictions", file);
        oracle = FitnessOracle::from_table(*table, space.objective(), a.oracle);
        if (a.algo == "hc") {
            std::vector<std::pair<ConfigId, double>> entries(table->entries().begin(), table->entries().end());
            for (const auto& e : entries) {
                if (!space.contains(e.first)) {
                    throw ValidationError("prediction for config " + std::to_string(e.first) + " is outside the space");
                }
            }
            surrogate_landscape.emplace(space, std::move(entries));
        }
    }
    std::optional<Landscape> warm_source;
    if (!a.warm_from.empty()) {
        warm_source.emplace(load_table(space, a.warm_from, a.in.column));
        report.add_input("warm_start_source", a.warm_from);
        report.set_seed("warm-start", warm_seed);
    }
    if (a.algo == "sa") report.set_seed("optimize", run_seed);

    std::vector<Trajectory> runs;
    json run_docs = json::array();
    std::string csv;
    if (!a.trajectory_out.empty()) csv = trajectory_csv_header();
    for (std::size_t r = 0; r < a.runs; ++r) {
        const std::uint64_t seed = derive_seed(run_seed, r);
        json doc = json::object();
        std::optional<ConfigId> start = a.start;
        if (warm_source) {
            const auto w = warm_start_pick(*warm_source, l, a.warm_q, derive_seed(warm_seed, r));
            start = w.id;
            doc["warm_start"] = to_json(w);
        }
        Trajectory t;
        if (a.algo == "hc") {
            if (!start) start = Rng(seed).below(space.cardinality());
            const Landscape& target = surrogate_landscape ? *surrogate_landscape : l;
            t = hill_climb(target, *start, strategy, seed);
            t.oracle = oracle.name;
            for (auto& s : t.steps) s.true_fitness = l.fitness(s.id);
            double best = t.steps.front().true_fitness.value();
            t.best_id = t.steps.front().id;
            for (auto& s : t.steps) {
                if (l.better(*s.true_fitness, best)) {
                    best = *s.true_fitness;
                    t.best_id = s.id;
                }
                s.best_so_far = best;
            }
        } else {
            SAParams p;
            p.initial_temperature = a.t0;
            p.cooling_rate = a.alpha;
            p.iterations = a.iterations;
            p.seed = seed;
            p.normalize = !a.no_normalize;
            p.log_every = a.log_every;
            if (start) {
                p.initial = InitialConfig::given;
                p.start = *start;
            }
            t = simulated_annealing(oracle, space, p, &l);
        }
        doc["run"] = r;
        doc["seed"] = seed;
        doc["trajectory"] = to_json(t, a.steps_in_report);
        run_docs.push_back(doc);
        if (!a.trajectory_out.empty()) csv += trajectory_csv_rows(t, r);
        runs.push_back(std::move(t));
        note(g, err, "optimize: run " + std::to_string(r) + " done");
    }
    if (!a.trajectory_out.empty()) emit(csv, a.trajectory_out, out);
    if (a.algo == "sa") report.set_budget("iterations", a.iterations);
    report.section("optimize") = {{"algorithm", a.algo},
                                  {"strategy", to_string(strategy)},
                                  {"oracle", a.oracle},
                                  {"initial_temperature", a.t0},
                                  {"cooling_rate", a.alpha},
                                  {"normalized_delta", !a.no_normalize},
                                  {"oracle_scale", oracle.scale},
                                  {"proposal", "uniform unit-distance neighbor"},
                                  {"runs", run_docs},
                                  {"summary", l.complete() ? to_json(summarize_runs(runs, l)) : json(nullptr)}};
    emit(report.text(), a.out, out);
    return kExitOk;
}

// ---- surrogate -------------------------------------------------------------

struct SurrogateArgs {
    LandscapeArgs in;
    std::string model = "tree";
    double train_fraction = 0.01;
    std::size_t max_depth = 6;
    std::vector<std::size_t> depth_sweep;
    std::size_t degree_cap = 2;
    double lambda = -1.0;
    std::size_t max_iter = 1000;
    double tol = 1e-7;
    std::uint64_t max_columns = 50000;
    std::optional<std::uint64_t> recall_k, recall_n;
    std::string predictions_out;
    std::string out;
};

int cmd_surrogate(const SurrogateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    require_seed(g, "surrogate (holdout split)");
    ReportBuilder report("surrogate");
    const auto l = load_landscape(a.in, &report);
    const std::uint64_t split_seed = derive_seed(g.seed, "surrogate-split");
    report.set_seed("master", g.seed);
    report.set_seed("surrogate-split", split_seed);
    const auto split = split_holdout(l, a.train_fraction, split_seed);
    json sec = {{"model", a.model},
                {"train_fraction", a.train_fraction},
                {"train_size", split.train.size()},
                {"holdout_size", split.test.size()}};

    std::unique_ptr<Predictor> model;
    if (a.model == "tree") {
        note(g, err, "surrogate: training tree");
        auto tree = RegressionTree::fit(l, split.train, a.max_depth);
        sec["tree"] = to_json(tree);
        if (!a.depth_sweep.empty()) {
            json curve = json::array();
            for (const auto d : a.depth_sweep) {
                const auto t = RegressionTree::fit(l, split.train, d);
                json point = {{"max_depth", d}, {"depth", t.depth()}, {"train_r2", r_squared(t, l, split.train)}};
                point["holdout_r2"] = split.test.empty() ? json(nullptr) : json(evaluate(t, l, split.test));
                curve.push_back(point);
            }
            sec["depth_curve"] = curve;
        }
        model = std::make_unique<RegressionTree>(std::move(tree));
    } else if (a.model == "lasso") {
        note(g, err, "surrogate: fitting lasso");
        std::vector<std::pair<ConfigId, double>> entries;
        for (const auto id : split.train) entries.emplace_back(id, l.fitness(id));
        const Landscape train(l.space(), std::move(entries));
        LassoParams p;
        p.degree_cap = a.degree_cap;
        p.lambda = a.lambda;
        p.max_iter = a.max_iter;
        p.tol = a.tol;
        p.max_columns = a.max_columns;
        p.seed = derive_seed(g.seed, "lasso");
        auto fit = lasso_poly(train, p);
        if (!fit.converged) {
            report.add_warning(warning("not_converged", "lasso",
                                       "coordinate descent stopped after " + std::to_string(fit.iterations) +
                                           " sweeps; residual rms " + format_double(fit.residual_rms)));
        }
        sec["lasso"] = to_json(fit);
        model = std::make_unique<LassoFit>(std::move(fit));
    } else {
        throw ValidationError("unknown model '" + a.model + "' (tree or lasso)");
    }
    sec["train_r2"] = r_squared(*model, l, split.train);
    sec["holdout_r2"] = split.test.empty() ? json(nullptr) : json(evaluate(*model, l, split.test));
    if (a.recall_k) {
        const auto k = *a.recall_k;
        const auto n = a.recall_n.value_or(k);
        sec["recall"] = {{"k", k}, {"n", n}, {"value", top_n_recall(*model, l, k, n)}};
    }
    if (!a.predictions_out.empty()) {
        const auto ids = l.ids();
        emit(predictions_csv(*model, ids), a.predictions_out, out);
    }
    report.section("surrogate") = sec;
    emit(report.text(), a.out, out);
    return kExitOk;
}

// ---- export ----------------------------------------------------------------

struct ExportArgs {
    LandscapeArgs in;
    std::string what = "landscape";
    std::string format = "graphml";
    std::string strategy = "best";
    std::uint64_t size_guard = kDefaultExportGuard;
    std::optional<std::uint64_t> lon_attempts;
    std::size_t lon_strength = 2;
    std::string out;
};

int cmd_export(const ExportArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
    const auto space = ConfigSpace::load(a.in.space);
    GraphFormat format;
    if (a.format == "graphml") {
        format = GraphFormat::graphml;
    } else if (a.format == "dot") {
        format = GraphFormat::dot;
    } else {
        throw ValidationError("unknown format '" + a.format + "' (graphml or dot)");
    }
    const auto strategy = parse_strategy(a.strategy);
    if (a.what == "landscape" && space.cardinality() > a.size_guard) {
        // Checked before loading the data.
        throw ValidationError("landscape has " + std::to_string(space.cardinality()) +
                              " configurations, above the export size guard of " + std::to_string(a.size_guard) +
                              "; export the local optima network instead (--what lon)");
    }
    const auto l = load_table(space, a.in.data, a.in.column);
    if (a.what == "landscape") {
        if (strategy == SearchStrategy::first_improvement) require_seed(g, "export with first-improvement basins");
        const auto b = assign_basins(l, strategy, derive_seed(g.seed, "basins"), g.threads);
        emit(export_landscape(l, b, format, a.size_guard), a.out, out);
    } else if (a.what == "lon") {
        require_seed(g, "export --what lon");
        LonParams p;
        p.attempts = a.lon_attempts.value_or(env_budget("CONFLA_LON_ATTEMPTS", 100, nullptr));
        p.perturbation_strength = a.lon_strength;
        p.strategy = strategy;
        p.seed = derive_seed(g.seed, "lon");
        const auto b = assign_basins(l, strategy, derive_seed(g.seed, "basins"), g.threads);
        emit(export_lon(build_lon(l, b, p, g.threads), format), a.out, out);
    } else if (a.what == "interactions") {
        if (format != GraphFormat::dot) throw ValidationError("the interaction network exports as DOT only");
        EffectParams ep;
        ep.background_cap = env_budget("CONFLA_BACKGROUND_CAP", 1u << 20, nullptr);
        ep.seed = derive_seed(g.seed, "effects");
        if (effects_subsample(space, ep.background_cap, true)) require_seed(g, "subsampled interactions");
        emit(export_interactions(space, pairwise_interactions(l, ep, g.threads)), a.out, out);
    } else {
        throw ValidationError("unknown export target '" + a.what + "' (landscape, lon or interactions)");
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fitness landscape analysis for configurable systems"};
    app.name("confla");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed (required for stochastic analyses)");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress progress messages");
    app.set_version_flag("--version", kToolVersion);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic landscape and its space");
    generate->require_subcommand(1);
    generate->fallthrough();
    auto* nk = generate->add_subcommand("nk", "NK landscape");
    nk->add_option("--n", gen.n, "number of binary options")->required();
    nk->add_option("--k", gen.k, "interacting loci per locus")->required();
    nk->add_option("--model", gen.model, "adjacent or random")->capture_default_str();
    nk->add_option("--out", gen.out, "landscape CSV")->required();
    nk->add_option("--space-out", gen.space_out, "space JSON")->required();
    auto* add = generate->add_subcommand("additive", "additive landscape");
    add->add_option("--n", gen.n, "number of binary options")->required();
    add->add_option("--weights", gen.weights, "explicit weights (default: seeded draw)")->delimiter(',');
    add->add_option("--out", gen.out, "landscape CSV")->required();
    add->add_option("--space-out", gen.space_out, "space JSON")->required();

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "ingest a measurement table and summarize it");
    add_landscape_args(build_cmd, build.in);
    build_cmd->add_option("--out", build.out, "write the normalized table (duplicates averaged)");
    build_cmd->add_option("--report", build.report_out, "report path (default stdout)");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "run the landscape analysis pipeline");
    AnalyzeArgs ef;
    auto* effects = app.add_subcommand("effects", "mutation effects, importance and interactions");
    for (auto [cmd, args] : {std::pair{analyze, &an}, std::pair{effects, &ef}}) {
        add_landscape_args(cmd, args->in);
        cmd->add_option("--background-cap", args->background_cap, "backgrounds per option/pair before subsampling");
        cmd->add_option("--alpha", args->alpha, "family-wise significance level")->capture_default_str();
        cmd->add_option("--effect-threshold", args->effect_threshold, "normalized effect-size cutoff")
            ->capture_default_str();
        cmd->add_option("--out", args->out, "report path (default stdout)");
    }
    analyze->add_option("--metrics", an.metrics, "comma-separated metrics or 'all'")->delimiter(',');
    analyze->add_option("--q", an.q, "prominent-region fraction")->capture_default_str();
    analyze->add_option("--strategy", an.strategy, "best or first improvement")->capture_default_str();
    analyze->add_option("--walks", an.walks, "random walks for autocorrelation");
    analyze->add_option("--walk-length", an.walk_length, "steps per walk");
    analyze->add_option("--max-lag", an.max_lag, "largest autocorrelation lag")->capture_default_str();
    analyze->add_option("--lon-attempts", an.lon_attempts, "escape attempts per local optimum");
    analyze->add_option("--lon-strength", an.lon_strength, "random moves per perturbation")->capture_default_str();
    analyze->add_option("--pair-cap", an.pair_cap, "member pairs before sampling");
    analyze->add_option("--distance-sample-cap", an.distance_sample_cap, "optima sampled for distance_to_global (0 = all)")
        ->capture_default_str();
    effects->add_option("--option", ef.option, "restrict to one option");
    effects->add_flag("--interactions", ef.interactions, "also compute pairwise interactions");
    effects->add_option("--dot", ef.dot_out, "write the interaction network (DOT)");

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "pairwise similarity of landscapes over one space");
    compare->add_option("--space", cmp.space, "configuration space JSON")->required()->check(CLI::ExistingFile);
    compare->add_option("--data", cmp.data, "two or more measurement tables")
        ->required()
        ->expected(2, -1)
        ->check(CLI::ExistingFile);
    compare->add_option("--fitness-column", cmp.column, "name of the fitness column")->capture_default_str();
    compare->add_option("--q", cmp.q, "top-region fraction")->capture_default_str();
    compare->add_option("--emd-cap", cmp.emd_cap, "optima per side before EMD subsampling")->capture_default_str();
    compare->add_option("--background-cap", cmp.background_cap, "backgrounds per option/pair before subsampling");
    compare->add_flag("--no-consistency", cmp.no_consistency, "skip importance/interaction consistency");
    compare->add_option("--out", cmp.out, "report path (default stdout)");

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "hill climbing or simulated annealing");
    add_landscape_args(optimize, opt.in);
    optimize->add_option("--algo", opt.algo, "hc or sa")->capture_default_str();
    optimize->add_option("--strategy", opt.strategy, "best or first (hill climbing)")->capture_default_str();
    optimize->add_option("--oracle", opt.oracle, "true or surrogate:<predictions.csv>")->capture_default_str();
    optimize->add_option("--warm-start-from", opt.warm_from, "table of a related landscape over the same space");
    optimize->add_option("--warm-q", opt.warm_q, "warm-start pool fraction")->capture_default_str();
    optimize->add_option("--runs", opt.runs, "independent runs")->capture_default_str();
    optimize->add_option("--iterations", opt.iterations, "annealing iterations")->capture_default_str();
    optimize->add_option("--t0", opt.t0, "initial temperature")->capture_default_str();
    optimize->add_option("--alpha", opt.alpha, "cooling rate")->capture_default_str();
    optimize->add_flag("--no-normalize", opt.no_normalize, "use raw fitness differences in the acceptance test");
    optimize->add_option("--start", opt.start, "start ConfigId (default random)");
    optimize->add_option("--log-every", opt.log_every, "trajectory decimation")->capture_default_str();
    optimize->add_option("--trajectory-out", opt.trajectory_out, "trajectory CSV");
    optimize->add_flag("--steps", opt.steps_in_report, "include trajectories in the report");
    optimize->add_option("--out", opt.out, "report path (default stdout)");

    SurrogateArgs sur;
    auto* surrogate = app.add_subcommand("surrogate", "fit a regression tree or LASSO probe");
    add_landscape_args(surrogate, sur.in);
    surrogate->add_option("--model", sur.model, "tree or lasso")->capture_default_str();
    surrogate->add_option("--train-fraction", sur.train_fraction, "training fraction")->capture_default_str();
    surrogate->add_option("--max-depth", sur.max_depth, "tree depth")->capture_default_str();
    surrogate->add_option("--depth-sweep", sur.depth_sweep, "extra depths for an R^2 curve")->delimiter(',');
    surrogate->add_option("--degree-cap", sur.degree_cap, "LASSO monomial degree")->capture_default_str();
    surrogate->add_option("--lambda", sur.lambda, "LASSO penalty (negative: cross-validate)")->capture_default_str();
    surrogate->add_option("--max-iter", sur.max_iter, "coordinate-descent sweeps")->capture_default_str();
    surrogate->add_option("--tol", sur.tol, "coefficient change tolerance")->capture_default_str();
    surrogate->add_option("--max-columns", sur.max_columns, "design column bound")->capture_default_str();
    surrogate->add_option("--recall-k", sur.recall_k, "true top-K for recall");
    surrogate->add_option("--recall-n", sur.recall_n, "predicted top-N for recall (default K)");
    surrogate->add_option("--predictions-out", sur.predictions_out, "write config_id,prediction CSV");
    surrogate->add_option("--out", sur.out, "report path (default stdout)");

    ExportArgs ex;
    auto* export_cmd = app.add_subcommand("export", "GraphML/DOT export");
    add_landscape_args(export_cmd, ex.in);
    export_cmd->add_option("--what", ex.what, "landscape, lon or interactions")->capture_default_str();
    export_cmd->add_option("--format", ex.format, "graphml or dot")->capture_default_str();
    export_cmd->add_option("--strategy", ex.strategy, "best or first")->capture_default_str();
    export_cmd->add_option("--size-guard", ex.size_guard, "largest exportable landscape")->capture_default_str();
    export_cmd->add_option("--lon-attempts", ex.lon_attempts, "escape attempts per local optimum");
    export_cmd->add_option("--lon-strength", ex.lon_strength, "random moves per perturbation")->capture_default_str();
    export_cmd->add_option("--out", ex.out, "output path (default stdout)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    g.seed_given = seed_opt->count() > 0;

    try {
        if (nk->parsed()) return cmd_generate_nk(gen, g, out, err);
        if (add->parsed()) return cmd_generate_additive(gen, g, out, err);
        if (build_cmd->parsed()) return cmd_build(build, g, out);
        if (analyze->parsed()) return cmd_analyze(an, g, out, err);
        if (effects->parsed()) return cmd_effects(ef, g, out, err);
        if (compare->parsed()) return cmd_compare(cmp, g, out, err);
        if (optimize->parsed()) return cmd_optimize(opt, g, out, err);
        if (surrogate->parsed()) return cmd_surrogate(sur, g, out, err);
        if (export_cmd->parsed()) return cmd_export(ex, g, out, err);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace confla
