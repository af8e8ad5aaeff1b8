#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "confla/config_space.hpp"

namespace confla {

/// Where a landscape's data came from.
struct SourceMeta {
    std::string file;
    std::uint64_t rows = 0;
    std::uint64_t duplicates = 0;  // rows whose ConfigId was already seen
};

enum class Fitter { a, b, tie };

/// Fitness values over a ConfigSpace.
///
/// Storage is a dense array indexed by ConfigId when every configuration has
/// a value, and a sorted (id, fitness) list otherwise. The neighbor graph is
/// implicit: edges are derived from the space on demand and never stored.
/// Immutable after construction.
class Landscape {
public:
    /// Complete landscape; values.size() must equal the space's cardinality.
    Landscape(ConfigSpace space, std::vector<double> values, SourceMeta meta = {});
    /// Partial (or complete) landscape from (id, fitness) entries with unique ids.
    Landscape(ConfigSpace space, std::vector<std::pair<ConfigId, double>> entries, SourceMeta meta = {});

    const ConfigSpace& space() const noexcept { return space_; }
    Objective objective() const noexcept { return space_.objective(); }
    bool complete() const noexcept { return complete_; }
    const SourceMeta& meta() const noexcept { return meta_; }

    /// Number of configurations that carry a fitness value.
    std::uint64_t size() const noexcept { return complete_ ? dense_.size() : sparse_.size(); }

    bool has(ConfigId id) const;
    /// Throws PreconditionError when id has no value.
    double fitness(ConfigId id) const;
    std::optional<double> try_fitness(ConfigId id) const;

    /// Fitness with the direction folded in: larger is always fitter.
    double oriented(ConfigId id) const { return orient(fitness(id)); }
    double orient(double value) const noexcept {
        return space_.objective() == Objective::maximize ? value : -value;
    }
    /// True when fitness value x is strictly better than y.
    bool better(double x, double y) const noexcept { return orient(x) > orient(y); }

    /// Dense values (complete landscapes only; empty span otherwise).
    std::span<const double> dense() const noexcept { return dense_; }

    /// Stored ids in ascending order (materialized for sparse landscapes).
    std::vector<ConfigId> ids() const;
    /// Stored fitness values, ascending id order.
    std::vector<double> values() const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        if (complete_) {
            for (ConfigId id = 0; id < dense_.size(); ++id) fn(id, dense_[id]);
        } else {
            for (const auto& [id, f] : sparse_) fn(id, f);
        }
    }

    /// Throws PreconditionError naming `what` when the landscape is incomplete.
    void require_complete(std::string_view what) const;

    /// Same space, fitness transformed value-by-value.
    template <class Fn>
    Landscape transformed(Fn&& fn) const {
        if (complete_) {
            std::vector<double> v(dense_.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(dense_[i]);
            return Landscape(space_, std::move(v), meta_);
        }
        auto entries = sparse_;
        for (auto& e : entries) e.second = fn(e.second);
        return Landscape(space_, std::move(entries), meta_);
    }

private:
    ConfigSpace space_;
    bool complete_ = false;
    std::vector<double> dense_;
    std::vector<std::pair<ConfigId, double>> sparse_;
    SourceMeta meta_;
};

/// Compares two configurations under the landscape's objective.
Fitter fitter(const Landscape& l, ConfigId a, ConfigId b);

/// Builds a complete landscape by evaluating fn(id) for every id.
template <class Fn>
Landscape tabulate(const ConfigSpace& space, Fn&& fn) {
    std::vector<double> values(space.cardinality());
    for (ConfigId id = 0; id < values.size(); ++id) values[id] = fn(id);
    return Landscape(space, std::move(values));
}

/// Loads a CSV table (header row, one column per option, one fitness
/// column; extra columns ignored). Duplicate configurations are averaged.
Landscape load_csv(const ConfigSpace& space, const std::filesystem::path& data_file,
                   const std::string& fitness_column);
Landscape load_csv(const std::filesystem::path& space_file, const std::filesystem::path& data_file,
                   const std::string& fitness_column);
/// Same as load_csv, for in-memory text.
Landscape parse_csv(const ConfigSpace& space, std::string_view text, const std::string& fitness_column,
                    const std::string& source_name = "<memory>");

/// Loads a JSON array of objects {option: value, ..., <fitness_column>: number}.
Landscape load_json(const ConfigSpace& space, const std::filesystem::path& data_file,
                    const std::string& fitness_column);
Landscape parse_json(const ConfigSpace& space, std::string_view text, const std::string& fitness_column,
                     const std::string& source_name = "<memory>");

/// Loads CSV or JSON depending on the file extension (.json => JSON).
Landscape load_table(const ConfigSpace& space, const std::filesystem::path& data_file,
                     const std::string& fitness_column);

/// Writes one row per stored configuration: option columns then fitness.
std::string to_csv(const Landscape& l, const std::string& fitness_column = "fitness");
std::string to_json_rows(const Landscape& l, const std::string& fitness_column = "fitness");

}  // namespace confla
