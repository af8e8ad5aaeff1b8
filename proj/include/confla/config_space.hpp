#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confla/error.hpp"

namespace confla {

/// Mixed-radix index of a configuration, in [0, cardinality).
using ConfigId = std::uint64_t;

enum class OptionKind { categorical, grid };
enum class Objective { minimize, maximize };

/// One configurable option and its domain.
///
/// Categorical options carry string labels and use a 0/1 distance. Grid
/// options carry strictly increasing numeric values and use the absolute
/// difference of level indices.
struct OptionSpec {
    std::string name;
    OptionKind kind = OptionKind::categorical;
    std::vector<std::string> labels;  // categorical
    std::vector<double> values;       // grid

    static OptionSpec categorical(std::string name, std::vector<std::string> labels);
    static OptionSpec grid(std::string name, std::vector<double> values);

    std::size_t level_count() const noexcept {
        return kind == OptionKind::categorical ? labels.size() : values.size();
    }
    /// Largest per-option distance between two levels.
    std::uint64_t max_distance() const noexcept {
        return kind == OptionKind::categorical ? 1 : level_count() - 1;
    }
    /// Level index for a textual cell value; nullopt when undeclared.
    std::optional<std::size_t> find_level(std::string_view text) const;
    /// Label used when writing this level to CSV/JSON.
    std::string level_text(std::size_t level) const;

    bool operator==(const OptionSpec&) const = default;
};

/// A configuration as per-option level indices.
using Configuration = std::vector<std::size_t>;

/// Declared options plus objective direction. Defines the mixed-radix
/// encoding (option 0 is the least significant digit), the unit-distance
/// neighborhood and the configuration distance.
///
/// Immutable after construction.
class ConfigSpace {
public:
    ConfigSpace(std::vector<OptionSpec> options, Objective objective);

    /// Parses the config-space JSON document.
    static ConfigSpace from_json_text(std::string_view text);
    static ConfigSpace load(const std::filesystem::path& path);
    std::string to_json_text() const;

    /// n binary categorical options named x0..x{n-1} with labels "0"/"1".
    static ConfigSpace binary(std::size_t n, Objective objective = Objective::maximize);

    const std::vector<OptionSpec>& options() const noexcept { return options_; }
    const OptionSpec& option(std::size_t i) const { return options_.at(i); }
    std::size_t option_count() const noexcept { return options_.size(); }
    std::optional<std::size_t> find_option(std::string_view name) const;
    Objective objective() const noexcept { return objective_; }

    std::uint64_t cardinality() const noexcept { return cardinality_; }
    std::uint64_t stride(std::size_t option) const { return strides_.at(option); }
    std::size_t level_count(std::size_t option) const { return options_.at(option).level_count(); }

    std::uint64_t diameter() const noexcept { return diameter_; }
    double radius() const noexcept { return static_cast<double>(diameter_) / 2.0; }

    ConfigId encode(std::span<const std::size_t> cfg) const;
    Configuration decode(ConfigId id) const;
    /// Level of one option inside an encoded id.
    std::size_t level_of(ConfigId id, std::size_t option) const noexcept {
        return static_cast<std::size_t>((id / strides_[option]) % options_[option].level_count());
    }
    /// Replaces one option's level in an encoded id.
    ConfigId with_level(ConfigId id, std::size_t option, std::size_t level) const noexcept {
        const auto cur = level_of(id, option);
        return id - cur * strides_[option] + level * strides_[option];
    }

    bool contains(ConfigId id) const noexcept { return id < cardinality_; }

    /// Calls fn(neighborId) for every configuration at distance exactly 1,
    /// in ascending ConfigId order.
    template <class Fn>
    void for_each_neighbor(ConfigId id, Fn&& fn) const {
        // Ascending id order: options are visited from most to least
        // significant for lower levels, then least to most for higher ones.
        const std::size_t n = options_.size();
        for (std::size_t k = n; k-- > 0;) {
            const auto& opt = options_[k];
            const std::size_t cur = level_of(id, k);
            const ConfigId base = id - cur * strides_[k];
            if (opt.kind == OptionKind::categorical) {
                for (std::size_t l = 0; l < cur; ++l) fn(base + l * strides_[k]);
            } else if (cur > 0) {
                fn(base + (cur - 1) * strides_[k]);
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            const auto& opt = options_[k];
            const std::size_t cur = level_of(id, k);
            const ConfigId base = id - cur * strides_[k];
            if (opt.kind == OptionKind::categorical) {
                for (std::size_t l = cur + 1; l < opt.level_count(); ++l) fn(base + l * strides_[k]);
            } else if (cur + 1 < opt.level_count()) {
                fn(base + (cur + 1) * strides_[k]);
            }
        }
    }

    std::vector<ConfigId> neighbors(ConfigId id) const;
    std::size_t neighbor_count(ConfigId id) const;
    /// Largest neighborhood size over the whole space.
    std::size_t max_neighbor_count() const noexcept { return max_degree_; }

    std::uint64_t distance(ConfigId a, ConfigId b) const;

    bool operator==(const ConfigSpace& other) const {
        return objective_ == other.objective_ && options_ == other.options_;
    }

private:
    void validate_id(ConfigId id) const;

    std::vector<OptionSpec> options_;
    Objective objective_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t cardinality_ = 1;
    std::uint64_t diameter_ = 0;
    std::size_t max_degree_ = 0;
};

std::string_view to_string(Objective objective);
std::string_view to_string(OptionKind kind);

}  // namespace confla
