#include "confla/config_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "confla/numeric_text.hpp"
#include "json.hpp"

namespace confla {

using nlohmann::json;

OptionSpec OptionSpec::categorical(std::string name, std::vector<std::string> labels) {
    OptionSpec spec;
    spec.name = std::move(name);
    spec.kind = OptionKind::categorical;
    spec.labels = std::move(labels);
    return spec;
}

OptionSpec OptionSpec::grid(std::string name, std::vector<double> values) {
    OptionSpec spec;
    spec.name = std::move(name);
    spec.kind = OptionKind::grid;
    spec.values = std::move(values);
    return spec;
}

std::optional<std::size_t> OptionSpec::find_level(std::string_view text) const {
    if (kind == OptionKind::categorical) {
        const auto it = std::find(labels.begin(), labels.end(), text);
        if (it == labels.end()) return std::nullopt;
        return static_cast<std::size_t>(it - labels.begin());
    }
    const auto value = parse_double(text);
    if (!value) return std::nullopt;
    const auto it = std::lower_bound(values.begin(), values.end(), *value);
    if (it == values.end() || *it != *value) return std::nullopt;
    return static_cast<std::size_t>(it - values.begin());
}

std::string OptionSpec::level_text(std::size_t level) const {
    if (kind == OptionKind::categorical) return labels.at(level);
    return format_double(values.at(level));
}

namespace {

void validate_option(const OptionSpec& opt) {
    if (opt.name.empty()) throw ValidationError("option name must not be empty");
    if (opt.level_count() < 2) {
        throw ValidationError("option '" + opt.name + "' needs at least 2 levels");
    }
    if (opt.kind == OptionKind::categorical) {
        std::set<std::string> seen(opt.labels.begin(), opt.labels.end());
        if (seen.size() != opt.labels.size()) {
            throw ValidationError("option '" + opt.name + "' has duplicate levels");
        }
    } else {
        for (std::size_t i = 0; i < opt.values.size(); ++i) {
            if (!std::isfinite(opt.values[i])) {
                throw ValidationError("option '" + opt.name + "' has a non-finite grid value");
            }
            if (i > 0 && !(opt.values[i - 1] < opt.values[i])) {
                throw ValidationError("grid option '" + opt.name + "' levels must be strictly increasing");
            }
        }
    }
}

}  // namespace

ConfigSpace::ConfigSpace(std::vector<OptionSpec> options, Objective objective)
    : options_(std::move(options)), objective_(objective) {
    if (options_.empty()) throw ValidationError("config space needs at least one option");
    std::set<std::string> names;
    strides_.reserve(options_.size());
    for (const auto& opt : options_) {
        validate_option(opt);
        if (!names.insert(opt.name).second) {
            throw ValidationError("duplicate option name '" + opt.name + "'");
        }
        strides_.push_back(cardinality_);
        std::uint64_t next = 0;
        if (__builtin_mul_overflow(cardinality_, static_cast<std::uint64_t>(opt.level_count()), &next)) {
            throw ValidationError("config space cardinality exceeds the 64-bit ConfigId range");
        }
        cardinality_ = next;
        diameter_ += opt.max_distance();
        max_degree_ += opt.kind == OptionKind::categorical ? opt.level_count() - 1
                                                           : std::min<std::size_t>(2, opt.level_count() - 1);
    }
}

ConfigSpace ConfigSpace::from_json_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config space is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config space must be a JSON object");

    Objective objective = Objective::minimize;
    if (doc.contains("objective")) {
        const auto& obj = doc["objective"];
        if (obj == "min" || obj == "minimize") {
            objective = Objective::minimize;
        } else if (obj == "max" || obj == "maximize") {
            objective = Objective::maximize;
        } else {
            throw ValidationError("objective must be \"min\" or \"max\"");
        }
    } else {
        throw ValidationError("config space is missing \"objective\"");
    }

    if (!doc.contains("options") || !doc["options"].is_array()) {
        throw ValidationError("config space is missing the \"options\" array");
    }
    std::vector<OptionSpec> options;
    for (const auto& item : doc["options"]) {
        if (!item.is_object() || !item.contains("name") || !item["name"].is_string()) {
            throw ValidationError("every option needs a string \"name\"");
        }
        const std::string name = item["name"];
        const std::string kind = item.value("kind", std::string("categorical"));
        if (!item.contains("levels") || !item["levels"].is_array()) {
            throw ValidationError("option '" + name + "' is missing the \"levels\" array");
        }
        if (kind == "categorical") {
            std::vector<std::string> labels;
            for (const auto& lv : item["levels"]) {
                if (lv.is_string()) {
                    labels.push_back(lv.get<std::string>());
                } else if (lv.is_number() || lv.is_boolean()) {
                    labels.push_back(lv.dump());
                } else {
                    throw ValidationError("option '" + name + "' has an unsupported level value");
                }
            }
            options.push_back(OptionSpec::categorical(name, std::move(labels)));
        } else if (kind == "grid") {
            std::vector<double> values;
            for (const auto& lv : item["levels"]) {
                if (!lv.is_number()) {
                    throw ValidationError("grid option '" + name + "' levels must be numbers");
                }
                values.push_back(lv.get<double>());
            }
            options.push_back(OptionSpec::grid(name, std::move(values)));
        } else {
            throw ValidationError("option '" + name + "' has unknown kind '" + kind + "'");
        }
    }
    return ConfigSpace(std::move(options), objective);
}

ConfigSpace ConfigSpace::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config space file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ConfigSpace::to_json_text() const {
    json doc;
    doc["objective"] = objective_ == Objective::minimize ? "min" : "max";
    json opts = json::array();
    for (const auto& opt : options_) {
        json o;
        o["name"] = opt.name;
        o["kind"] = to_string(opt.kind);
        if (opt.kind == OptionKind::categorical) {
            o["levels"] = opt.labels;
        } else {
            o["levels"] = opt.values;
        }
        opts.push_back(std::move(o));
    }
    doc["options"] = std::move(opts);
    return doc.dump(2) + "\n";
}

ConfigSpace ConfigSpace::binary(std::size_t n, Objective objective) {
    std::vector<OptionSpec> options;
    options.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        options.push_back(OptionSpec::categorical("x" + std::to_string(i), {"0", "1"}));
    }
    return ConfigSpace(std::move(options), objective);
}

std::optional<std::size_t> ConfigSpace::find_option(std::string_view name) const {
    for (std::size_t i = 0; i < options_.size(); ++i) {
        if (options_[i].name == name) return i;
    }
    return std::nullopt;
}

ConfigId ConfigSpace::encode(std::span<const std::size_t> cfg) const {
    if (cfg.size() != options_.size()) {
        throw ValidationError("configuration has " + std::to_string(cfg.size()) + " levels, space has " +
                              std::to_string(options_.size()) + " options");
    }
    ConfigId id = 0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (cfg[i] >= options_[i].level_count()) {
            throw ValidationError("level index " + std::to_string(cfg[i]) + " out of range for option '" +
                                  options_[i].name + "'");
        }
        id += cfg[i] * strides_[i];
    }
    return id;
}

Configuration ConfigSpace::decode(ConfigId id) const {
    validate_id(id);
    Configuration cfg(options_.size());
    for (std::size_t i = 0; i < options_.size(); ++i) cfg[i] = level_of(id, i);
    return cfg;
}

std::vector<ConfigId> ConfigSpace::neighbors(ConfigId id) const {
    validate_id(id);
    std::vector<ConfigId> out;
    out.reserve(max_degree_);
    for_each_neighbor(id, [&](ConfigId nb) { out.push_back(nb); });
    return out;
}

std::size_t ConfigSpace::neighbor_count(ConfigId id) const {
    validate_id(id);
    std::size_t count = 0;
    for (std::size_t k = 0; k < options_.size(); ++k) {
        const auto& opt = options_[k];
        if (opt.kind == OptionKind::categorical) {
            count += opt.level_count() - 1;
        } else {
            const auto cur = level_of(id, k);
            count += (cur > 0 ? 1 : 0) + (cur + 1 < opt.level_count() ? 1 : 0);
        }
    }
    return count;
}

std::uint64_t ConfigSpace::distance(ConfigId a, ConfigId b) const {
    validate_id(a);
    validate_id(b);
    std::uint64_t d = 0;
    for (std::size_t k = 0; k < options_.size(); ++k) {
        const auto la = level_of(a, k);
        const auto lb = level_of(b, k);
        if (options_[k].kind == OptionKind::categorical) {
            d += la != lb ? 1 : 0;
        } else {
            d += la > lb ? la - lb : lb - la;
        }
    }
    return d;
}

void ConfigSpace::validate_id(ConfigId id) const {
    if (id >= cardinality_) {
        throw ValidationError("ConfigId " + std::to_string(id) + " outside [0, " + std::to_string(cardinality_) + ")");
    }
}

std::string_view to_string(Objective objective) {
    return objective == Objective::minimize ? "min" : "max";
}

std::string_view to_string(OptionKind kind) {
    return kind == OptionKind::categorical ? "categorical" : "grid";
}

}  // namespace confla
