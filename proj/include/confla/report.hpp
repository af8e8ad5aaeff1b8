#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "confla/compare.hpp"
#include "confla/effects.hpp"
#include "confla/metrics.hpp"
#include "confla/search.hpp"
#include "confla/stats.hpp"
#include "confla/surrogate.hpp"

namespace confla {

inline constexpr const char* kToolName = "confla";
inline constexpr const char* kToolVersion = "0.1.0";

/// Id lists longer than this are truncated in reports (with a warning).
inline constexpr std::size_t kReportListCap = 1000;

using json = nlohmann::json;

/// FNV-1a 64 of a file's bytes, as 16 lowercase hex digits.
std::string file_fnv1a64(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

/// Structured warning entry.
json warning(std::string code, std::string metric, std::string message);

/// Accumulates the sections of one report document.
class ReportBuilder {
public:
    explicit ReportBuilder(std::string command);

    void add_input(const std::string& role, const std::filesystem::path& path);
    void set_seed(const std::string& section, std::uint64_t seed);
    void set_budget(const std::string& key, json value);
    void set_environment(const std::string& name, const std::string& value);
    void add_warning(json w);
    json& section(const std::string& name) { return doc_["results"][name]; }
    bool has_section(const std::string& name) const;

    const json& document() const { return doc_; }
    /// Pretty-printed JSON with sorted keys and a trailing newline.
    std::string text() const;

private:
    json doc_;
};

json to_json(const stats::DistributionStats& s);
json to_json(const stats::KsResult& ks);
json to_json(const ConfigSpace& space, ConfigId id);  // {"id": .., "config": {option: level}}

json to_json(const LocalOptimaReport& r, std::vector<json>* warnings = nullptr);
json to_json(const BasinAssignment& b, std::vector<json>* warnings = nullptr);
json to_json(const LocalOptimaNetwork& lon);
json to_json(const AutocorrelationResult& a);
json to_json(const ProminentRegionReport& p);
json to_json(const DistanceToGlobalReport& d);
json to_json(const GlobalOptimum& g);

json to_json(const ConfigSpace& space, const std::vector<MutationEffect>& effects);
json to_json(const ImportanceVector& v);
json to_json(const ConfigSpace& space, const InteractionMatrix& m);

json to_json(const FitnessCorrelation& c);
json to_json(const TopRegionOverlap& t);
json to_json(const OptimaSimilarity& o);
json to_json(const GlobalOptimumShift& g);
json to_json(const Consistency& c);
json to_json(const ComparisonReport& r);

json to_json(const RegressionTree& t);
json to_json(const LassoFit& f);
json to_json(const Trajectory& t, bool include_steps);
json to_json(const WarmStart& w);
json to_json(const BatchSummary& b);

/// Trajectory CSV rows: run,iteration,config_id,oracle_fitness,true_fitness,best_so_far.
std::string trajectory_csv_header();
std::string trajectory_csv_rows(const Trajectory& t, std::size_t run);

}  // namespace confla
