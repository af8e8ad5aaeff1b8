#include "confla/report.hpp"

#include <fstream>

#include "confla/error.hpp"
#include "confla/numeric_text.hpp"

namespace confla {

std::string hex64(std::uint64_t value) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string file_fnv1a64(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return hex64(h);
}

json warning(std::string code, std::string metric, std::string message) {
    return json{{"code", std::move(code)}, {"metric", std::move(metric)}, {"message", std::move(message)}};
}

ReportBuilder::ReportBuilder(std::string command) {
    doc_["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc_["command"] = std::move(command);
    doc_["inputs"] = json::array();
    doc_["seeds"] = json::object();
    doc_["budgets"] = json::object();
    doc_["environment"] = json::object();
    doc_["warnings"] = json::array();
    doc_["results"] = json::object();
    doc_["policies"] = {
        {"ranks", "0-based best-first; average ranks for correlations, lowest ConfigId for set membership"},
        {"percentile", "fraction of configurations strictly fitter"},
        {"encoding", "mixed radix, option 0 least significant"},
    };
}

void ReportBuilder::add_input(const std::string& role, const std::filesystem::path& path) {
    doc_["inputs"].push_back({{"role", role}, {"path", path.generic_string()}, {"fnv1a64", file_fnv1a64(path)}});
}

void ReportBuilder::set_seed(const std::string& section, std::uint64_t seed) { doc_["seeds"][section] = seed; }

void ReportBuilder::set_budget(const std::string& key, json value) { doc_["budgets"][key] = std::move(value); }

void ReportBuilder::set_environment(const std::string& name, const std::string& value) {
    doc_["environment"][name] = value;
}

void ReportBuilder::add_warning(json w) { doc_["warnings"].push_back(std::move(w)); }

bool ReportBuilder::has_section(const std::string& name) const { return doc_["results"].contains(name); }

std::string ReportBuilder::text() const { return doc_.dump(2) + "\n"; }

json to_json(const stats::DistributionStats& s) {
    json j{{"count", s.count}, {"mean", s.mean}, {"stdev", s.stdev}, {"min", s.min}, {"max", s.max}};
    j["skewness"] = s.skewness ? json(*s.skewness) : json(nullptr);
    json pct = json::object();
    for (std::size_t i = 0; i < stats::kReportedPercentiles.size(); ++i) {
        pct["p" + std::to_string(static_cast<int>(stats::kReportedPercentiles[i]))] = s.percentiles[i];
    }
    j["percentiles"] = pct;
    return j;
}

json to_json(const stats::KsResult& ks) { return {{"statistic", ks.statistic}, {"p_value", ks.p_value}}; }

json to_json(const ConfigSpace& space, ConfigId id) {
    json cfg = json::object();
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        cfg[space.option(k).name] = space.option(k).level_text(space.level_of(id, k));
    }
    return {{"id", id}, {"config", cfg}};
}

namespace {

json capped_ids(const std::vector<ConfigId>& ids, bool& truncated) {
    truncated = ids.size() > kReportListCap;
    const std::size_t n = std::min(ids.size(), kReportListCap);
    return json(std::vector<ConfigId>(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n)));
}

}  // namespace

json to_json(const LocalOptimaReport& r, std::vector<json>* warnings) {
    bool truncated = false;
    json j{{"count", r.optima.size()},
           {"cardinality", r.cardinality},
           {"proportion", r.proportion},
           {"plateau_count", r.plateau_count},
           {"optima", capped_ids(r.optima, truncated)},
           {"optima_truncated", truncated}};
    if (warnings && truncated) {
        warnings->push_back(warning("list_truncated", "local_optima",
                                    "optima list truncated to " + std::to_string(kReportListCap) + " ids"));
    }
    if (warnings && r.plateau_count > 0) {
        warnings->push_back(warning("plateaus", "local_optima",
                                    std::to_string(r.plateau_count) +
                                        " configurations have no fitter neighbor but tie with one"));
    }
    return j;
}

json to_json(const BasinAssignment& b, std::vector<json>* warnings) {
    std::vector<double> sizes, radii;
    for (const auto& basin : b.basins) {
        sizes.push_back(static_cast<double>(basin.size));
        radii.push_back(basin.radius);
    }
    json list = json::array();
    const std::size_t n = std::min(b.basins.size(), kReportListCap);
    for (std::size_t i = 0; i < n; ++i) {
        list.push_back({{"optimum", b.basins[i].optimum}, {"size", b.basins[i].size}, {"radius", b.basins[i].radius}});
    }
    json j{{"strategy", to_string(b.strategy)},
           {"seed", b.seed},
           {"basin_count", b.basins.size()},
           {"plateau_bucket", b.plateau_bucket},
           {"basins", list},
           {"basins_truncated", b.basins.size() > kReportListCap}};
    if (!sizes.empty()) {
        j["size_distribution"] = to_json(stats::describe(sizes));
        j["radius_distribution"] = to_json(stats::describe(radii));
    }
    if (warnings && b.plateau_bucket > 0) {
        warnings->push_back(warning("plateau_bucket", "basins",
                                    std::to_string(b.plateau_bucket) +
                                        " configurations reach a plateau instead of a strict optimum"));
    }
    return j;
}

json to_json(const LocalOptimaNetwork& lon) {
    std::uint64_t lost = 0, self_loops = 0, escapes = 0;
    for (const auto v : lon.lost) lost += v;
    for (const auto& e : lon.edges) (e.from == e.to ? self_loops : escapes) += e.weight;
    return {{"vertices", lon.vertices.size()},
            {"edges", lon.edges.size()},
            {"perturbation_strength", lon.params.perturbation_strength},
            {"attempts", lon.params.attempts},
            {"strategy", to_string(lon.params.strategy)},
            {"seed", lon.params.seed},
            {"self_loop_weight", self_loops},
            {"escape_weight", escapes},
            {"lost_attempts", lost}};
}

json to_json(const AutocorrelationResult& a) {
    return {{"walks", a.params.walks},
            {"walk_length", a.params.walk_length},
            {"max_lag", a.params.max_lag},
            {"seed", a.params.seed},
            {"rho", a.rho}};
}

json to_json(const ProminentRegionReport& p) {
    return {{"q", p.q},
            {"size", p.members.size()},
            {"exact_pairs", p.exact_pairs},
            {"member_distances", to_json(p.member_distances)},
            {"random_distances", to_json(p.random_distances)},
            {"ks", to_json(p.ks)},
            {"component_count", p.component_count}};
}

json to_json(const GlobalOptimum& g) { return {{"id", g.id}, {"fitness", g.fitness}, {"tied", g.tied}}; }

json to_json(const DistanceToGlobalReport& d) {
    return {{"global_optimum", to_json(d.global)},
            {"optima_count", d.optima_count},
            {"sampled", d.sampled},
            {"distances", to_json(d.distances)}};
}

json to_json(const ConfigSpace& space, const std::vector<MutationEffect>& effects) {
    json arr = json::array();
    for (const auto& e : effects) {
        const auto& opt = space.option(e.option);
        arr.push_back({{"option", opt.name},
                       {"from", opt.level_text(e.from_level)},
                       {"to", opt.level_text(e.to_level)},
                       {"backgrounds", e.background_count},
                       {"background_total", e.background_total},
                       {"sampled", e.sampled},
                       {"beneficial", e.beneficial},
                       {"detrimental", e.detrimental},
                       {"neutral", e.neutral},
                       {"mean_delta", e.mean_delta},
                       {"stdev_delta", e.stdev_delta},
                       {"mean_raw_delta", e.mean_raw_delta},
                       {"histogram", e.histogram}});
    }
    return arr;
}

json to_json(const ImportanceVector& v) {
    json opts = json::array();
    for (const auto& o : v.options) {
        opts.push_back({{"option", o.name},
                        {"mean_abs_effect", o.mean_abs_effect},
                        {"mean_effect", o.mean_effect},
                        {"samples", o.samples},
                        {"p_value", o.p_value},
                        {"significant", o.significant},
                        {"above_threshold", o.above_threshold}});
    }
    return {{"options", opts},
            {"alpha", v.alpha},
            {"corrected_alpha", v.corrected_alpha},
            {"effect_threshold", v.effect_threshold},
            {"test", v.test}};
}

json to_json(const ConfigSpace& space, const InteractionMatrix& m) {
    json pairs = json::array();
    for (const auto& p : m.pairs) {
        pairs.push_back({{"a", space.option(p.i).name},
                         {"b", space.option(p.j).name},
                         {"mean", p.mean},
                         {"stdev", p.stdev},
                         {"mean_raw", p.mean_raw},
                         {"positive", p.positive},
                         {"negative", p.negative},
                         {"zero", p.zero},
                         {"samples", p.samples},
                         {"sampled", p.sampled},
                         {"p_value", p.p_value},
                         {"significant", p.significant},
                         {"sign", p.sign()}});
    }
    return {{"pairs", pairs}, {"alpha", m.alpha}, {"corrected_alpha", m.corrected_alpha}, {"test", m.test}};
}

json to_json(const FitnessCorrelation& c) {
    return {{"pearson", c.pearson}, {"spearman", c.spearman}, {"support", c.support}, {"common_support", c.common_support}};
}

json to_json(const TopRegionOverlap& t) {
    return {{"q", t.q},
            {"size", t.size},
            {"jaccard", t.jaccard},
            {"shake_up_ab", t.shake_up_ab},
            {"shake_up_ba", t.shake_up_ba},
            {"percentile_shift_ab", t.percentile_shift_ab},
            {"percentile_shift_ba", t.percentile_shift_ba}};
}

json to_json(const OptimaSimilarity& o) {
    return {{"jaccard", o.jaccard}, {"emd", o.emd},         {"approximate", o.approximate}, {"count_a", o.count_a},
            {"count_b", o.count_b}, {"used_a", o.used_a}, {"used_b", o.used_b}};
}

json to_json(const GlobalOptimumShift& g) {
    return {{"optimum_a", g.optimum_a},
            {"optimum_b", g.optimum_b},
            {"distance", g.distance},
            {"rank_shift_ab", g.rank_shift_ab},
            {"rank_shift_ba", g.rank_shift_ba},
            {"ordinal_shift_ab", g.ordinal_shift_ab},
            {"ordinal_shift_ba", g.ordinal_shift_ba}};
}

json to_json(const Consistency& c) {
    json j{{"importance_spearman", c.importance_spearman}};
    j["interaction_spearman"] = c.interaction_spearman ? json(*c.interaction_spearman) : json(nullptr);
    return j;
}

json to_json(const ComparisonReport& r) {
    json j{{"correlation", to_json(r.correlation)},
           {"top_region", to_json(r.top)},
           {"local_optima", to_json(r.optima)},
           {"global_optimum", to_json(r.global)}};
    j["consistency"] = r.consistency ? to_json(*r.consistency) : json(nullptr);
    return j;
}

json to_json(const RegressionTree& t) {
    return {{"max_depth", t.max_depth()},
            {"depth", t.depth()},
            {"nodes", t.nodes().size()},
            {"leaves", t.leaf_count()},
            {"training_size", t.training_ids().size()}};
}

json to_json(const LassoFit& f) {
    json terms = json::array();
    for (std::size_t j = 0; j < f.terms.size(); ++j) {
        if (f.coefficients[j] == 0.0) continue;
        json factors = json::array();
        for (const auto& [opt, level] : f.terms[j].factors) {
            factors.push_back({{"option", f.space.option(opt).name}, {"level", f.space.option(opt).level_text(level)}});
        }
        terms.push_back({{"factors", factors},
                         {"degree", f.terms[j].degree()},
                         {"coefficient", f.coefficients[j]},
                         {"standardized", f.standardized_coefficients[j]}});
    }
    return {{"degree_cap", f.degree_cap},
            {"lambda", f.lambda},
            {"lambda_from_cv", f.lambda_from_cv},
            {"intercept", f.intercept},
            {"columns", f.terms.size()},
            {"rows", f.rows.size()},
            {"terms_per_degree", f.terms_per_degree},
            {"nonzero_fraction_per_degree", f.nonzero_fraction_per_degree},
            {"nonzero_terms", terms},
            {"converged", f.converged},
            {"iterations", f.iterations},
            {"final_max_change", f.final_max_change},
            {"residual_rms", f.residual_rms},
            {"final_objective", f.objective_history.empty() ? json(nullptr) : json(f.objective_history.back())}};
}

json to_json(const Trajectory& t, bool include_steps) {
    json j{{"termination", t.termination},
           {"final_id", t.final_id},
           {"best_id", t.best_id},
           {"iterations", t.iterations},
           {"accepted", t.accepted},
           {"oracle", t.oracle},
           {"normalized", t.normalized},
           {"scale", t.scale},
           {"decimated", t.decimated},
           {"log_every", t.log_every},
           {"logged_steps", t.steps.size()}};
    if (!t.steps.empty()) {
        const auto& last = t.steps.back();
        j["final_oracle_fitness"] = last.oracle_fitness;
        j["final_true_fitness"] = last.true_fitness ? json(*last.true_fitness) : json(nullptr);
        j["best_so_far"] = last.best_so_far;
    }
    if (include_steps) {
        json steps = json::array();
        for (const auto& s : t.steps) {
            steps.push_back({{"iteration", s.iteration},
                             {"id", s.id},
                             {"oracle_fitness", s.oracle_fitness},
                             {"true_fitness", s.true_fitness ? json(*s.true_fitness) : json(nullptr)},
                             {"best_so_far", s.best_so_far}});
        }
        j["steps"] = steps;
    }
    return j;
}

json to_json(const WarmStart& w) {
    return {{"id", w.id},
            {"pool", w.pool},
            {"source_percentile", w.source_percentile},
            {"target_percentile", w.target_percentile}};
}

json to_json(const BatchSummary& b) {
    return {{"runs", b.runs},
            {"final_fitness", to_json(b.final_fitness)},
            {"coefficient_of_variation", b.coefficient_of_variation},
            {"global_hit_rate", b.global_hit_rate}};
}

std::string trajectory_csv_header() { return "run,iteration,config_id,oracle_fitness,true_fitness,best_so_far\n"; }

std::string trajectory_csv_rows(const Trajectory& t, std::size_t run) {
    std::string out;
    for (const auto& s : t.steps) {
        out += std::to_string(run) + ',' + std::to_string(s.iteration) + ',' + std::to_string(s.id) + ',' +
               format_double(s.oracle_fitness) + ',' + (s.true_fitness ? format_double(*s.true_fitness) : "") + ',' +
               format_double(s.best_so_far) + '\n';
    }
    return out;
}

}  // namespace confla
