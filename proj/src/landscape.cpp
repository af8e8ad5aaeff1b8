#include "confla/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "confla/numeric_text.hpp"
#include "json.hpp"

namespace confla {

namespace {

// Above this many configurations duplicate aggregation switches from dense
// accumulators to a hash map.
constexpr std::uint64_t kDenseAccumulatorLimit = std::uint64_t{1} << 26;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open data file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Splits CSV text into records. Handles quoted fields with "" escapes and
/// CRLF line endings; blank lines are skipped.
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    auto end_row = [&] {
        if (any || !field.empty() || !row.empty()) {
            row.push_back(std::move(field));
            rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                any = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                field.push_back(c);
                any = true;
        }
    }
    if (in_quotes) throw ValidationError("CSV ends inside a quoted field");
    end_row();
    return rows;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

/// Collects (id, fitness) observations and averages duplicates.
class Aggregator {
public:
    explicit Aggregator(const ConfigSpace& space) : space_(space) {
        if (space.cardinality() <= kDenseAccumulatorLimit) {
            sum_.assign(space.cardinality(), 0.0);
            count_.assign(space.cardinality(), 0);
        }
    }

    void add(ConfigId id, double f) {
        ++rows_;
        if (!sum_.empty()) {
            if (count_[id]++ > 0) ++duplicates_;
            sum_[id] += f;
            return;
        }
        auto [it, inserted] = map_.try_emplace(id, 0.0, 0);
        if (!inserted) ++duplicates_;
        it->second.first += f;
        it->second.second += 1;
    }

    Landscape finish(const std::string& source) && {
        if (rows_ == 0) throw ValidationError("data file " + source + " has no data rows");
        SourceMeta meta{source, rows_, duplicates_};
        std::vector<std::pair<ConfigId, double>> entries;
        if (!sum_.empty()) {
            for (ConfigId id = 0; id < sum_.size(); ++id) {
                if (count_[id] > 0) entries.emplace_back(id, sum_[id] / static_cast<double>(count_[id]));
            }
        } else {
            entries.reserve(map_.size());
            for (const auto& [id, acc] : map_) entries.emplace_back(id, acc.first / static_cast<double>(acc.second));
            std::sort(entries.begin(), entries.end());
        }
        return Landscape(space_, std::move(entries), std::move(meta));
    }

private:
    const ConfigSpace& space_;
    std::vector<double> sum_;
    std::vector<std::uint32_t> count_;
    std::unordered_map<ConfigId, std::pair<double, std::uint64_t>> map_;
    std::uint64_t rows_ = 0;
    std::uint64_t duplicates_ = 0;
};

double checked_fitness(std::optional<double> value, const std::string& where) {
    if (!value) throw ValidationError(where + ": fitness is not a number");
    if (!std::isfinite(*value)) throw ValidationError(where + ": non-finite fitness");
    return *value;
}

}  // namespace

Landscape::Landscape(ConfigSpace space, std::vector<double> values, SourceMeta meta)
    : space_(std::move(space)), complete_(true), dense_(std::move(values)), meta_(std::move(meta)) {
    if (dense_.size() != space_.cardinality()) {
        throw ValidationError("dense fitness array has " + std::to_string(dense_.size()) +
                              " entries, space cardinality is " + std::to_string(space_.cardinality()));
    }
    for (double f : dense_) {
        if (!std::isfinite(f)) throw ValidationError("landscape fitness values must be finite");
    }
}

Landscape::Landscape(ConfigSpace space, std::vector<std::pair<ConfigId, double>> entries, SourceMeta meta)
    : space_(std::move(space)), meta_(std::move(meta)) {
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!space_.contains(entries[i].first)) throw ValidationError("ConfigId outside the config space");
        if (i > 0 && entries[i - 1].first == entries[i].first) {
            throw ValidationError("duplicate ConfigId " + std::to_string(entries[i].first));
        }
        if (!std::isfinite(entries[i].second)) throw ValidationError("landscape fitness values must be finite");
    }
    if (entries.size() == space_.cardinality()) {
        complete_ = true;
        dense_.reserve(entries.size());
        for (const auto& e : entries) dense_.push_back(e.second);
    } else {
        sparse_ = std::move(entries);
    }
}

bool Landscape::has(ConfigId id) const {
    if (complete_) return id < dense_.size();
    const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), id,
                                     [](const auto& e, ConfigId v) { return e.first < v; });
    return it != sparse_.end() && it->first == id;
}

std::optional<double> Landscape::try_fitness(ConfigId id) const {
    if (complete_) {
        if (id < dense_.size()) return dense_[id];
        return std::nullopt;
    }
    const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), id,
                                     [](const auto& e, ConfigId v) { return e.first < v; });
    if (it != sparse_.end() && it->first == id) return it->second;
    return std::nullopt;
}

double Landscape::fitness(ConfigId id) const {
    if (complete_ && id < dense_.size()) return dense_[id];
    const auto f = try_fitness(id);
    if (!f) throw PreconditionError("no fitness recorded for ConfigId " + std::to_string(id));
    return *f;
}

std::vector<ConfigId> Landscape::ids() const {
    std::vector<ConfigId> out;
    out.reserve(size());
    for_each([&](ConfigId id, double) { out.push_back(id); });
    return out;
}

std::vector<double> Landscape::values() const {
    if (complete_) return dense_;
    std::vector<double> out;
    out.reserve(sparse_.size());
    for (const auto& e : sparse_) out.push_back(e.second);
    return out;
}

void Landscape::require_complete(std::string_view what) const {
    if (!complete_) {
        throw PreconditionError(std::string(what) + " requires a complete landscape (" + std::to_string(size()) +
                                " of " + std::to_string(space_.cardinality()) + " configurations present)");
    }
}

Fitter fitter(const Landscape& l, ConfigId a, ConfigId b) {
    const double fa = l.fitness(a);
    const double fb = l.fitness(b);
    if (fa == fb) return Fitter::tie;
    return l.better(fa, fb) ? Fitter::a : Fitter::b;
}

Landscape parse_csv(const ConfigSpace& space, std::string_view text, const std::string& fitness_column,
                    const std::string& source_name) {
    const auto rows = split_csv(text);
    if (rows.empty()) throw ValidationError("data file " + source_name + " is empty");
    const auto& header = rows.front();

    std::vector<std::ptrdiff_t> option_col(space.option_count(), -1);
    std::ptrdiff_t fitness_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name == fitness_column) {
            fitness_col = static_cast<std::ptrdiff_t>(c);
        } else if (const auto opt = space.find_option(name)) {
            option_col[*opt] = static_cast<std::ptrdiff_t>(c);
        }
    }
    if (fitness_col < 0) {
        throw ValidationError("data file " + source_name + " has no fitness column '" + fitness_column + "'");
    }
    for (std::size_t k = 0; k < option_col.size(); ++k) {
        if (option_col[k] < 0) {
            throw ValidationError("data file " + source_name + " has no column for option '" + space.option(k).name +
                                  "'");
        }
    }

    Aggregator agg(space);
    Configuration cfg(space.option_count());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = source_name + " row " + std::to_string(r + 1);
        if (row.size() != header.size()) {
            throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(row.size()));
        }
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            const std::string cell = trim(row[static_cast<std::size_t>(option_col[k])]);
            const auto level = space.option(k).find_level(cell);
            if (!level) {
                throw ValidationError(where + ": undeclared level '" + cell + "' for option '" +
                                      space.option(k).name + "'");
            }
            cfg[k] = *level;
        }
        const double f = checked_fitness(parse_double(row[static_cast<std::size_t>(fitness_col)]), where);
        agg.add(space.encode(cfg), f);
    }
    return std::move(agg).finish(source_name);
}

Landscape load_csv(const ConfigSpace& space, const std::filesystem::path& data_file,
                   const std::string& fitness_column) {
    return parse_csv(space, read_file(data_file), fitness_column, data_file.string());
}

Landscape load_csv(const std::filesystem::path& space_file, const std::filesystem::path& data_file,
                   const std::string& fitness_column) {
    return load_csv(ConfigSpace::load(space_file), data_file, fitness_column);
}

Landscape parse_json(const ConfigSpace& space, std::string_view text, const std::string& fitness_column,
                     const std::string& source_name) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("data file " + source_name + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ValidationError("data file " + source_name + " must hold a JSON array");
    if (doc.empty()) throw ValidationError("data file " + source_name + " is empty");

    Aggregator agg(space);
    Configuration cfg(space.option_count());
    for (std::size_t r = 0; r < doc.size(); ++r) {
        const auto& item = doc[r];
        const std::string where = source_name + " record " + std::to_string(r);
        if (!item.is_object()) throw ValidationError(where + ": expected an object");
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            const auto& opt = space.option(k);
            const auto it = item.find(opt.name);
            if (it == item.end()) throw ValidationError(where + ": missing option '" + opt.name + "'");
            const std::string cell = it->is_string() ? it->get<std::string>() : it->dump();
            const auto level = opt.find_level(cell);
            if (!level) {
                throw ValidationError(where + ": undeclared level '" + cell + "' for option '" + opt.name + "'");
            }
            cfg[k] = *level;
        }
        const auto fit = item.find(fitness_column);
        if (fit == item.end()) throw ValidationError(where + ": missing fitness '" + fitness_column + "'");
        std::optional<double> value;
        if (fit->is_number()) value = fit->get<double>();
        const double f = checked_fitness(value, where);
        agg.add(space.encode(cfg), f);
    }
    return std::move(agg).finish(source_name);
}

Landscape load_json(const ConfigSpace& space, const std::filesystem::path& data_file,
                    const std::string& fitness_column) {
    return parse_json(space, read_file(data_file), fitness_column, data_file.string());
}

Landscape load_table(const ConfigSpace& space, const std::filesystem::path& data_file,
                     const std::string& fitness_column) {
    if (data_file.extension() == ".json") return load_json(space, data_file, fitness_column);
    return load_csv(space, data_file, fitness_column);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string to_csv(const Landscape& l, const std::string& fitness_column) {
    const auto& space = l.space();
    std::string out;
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        out += csv_field(space.option(k).name);
        out += ',';
    }
    out += csv_field(fitness_column);
    out += '\n';
    l.for_each([&](ConfigId id, double f) {
        for (std::size_t k = 0; k < space.option_count(); ++k) {
            out += csv_field(space.option(k).level_text(space.level_of(id, k)));
            out += ',';
        }
        out += format_double(f);
        out += '\n';
    });
    return out;
}

std::string to_json_rows(const Landscape& l, const std::string& fitness_column) {
    using nlohmann::ordered_json;
    const auto& space = l.space();
    ordered_json rows = ordered_json::array();
    l.for_each([&](ConfigId id, double f) {
        ordered_json row;
        for (std::size_t k = 0; k < space.option_count(); ++k) {
            const auto& opt = space.option(k);
            const auto level = space.level_of(id, k);
            if (opt.kind == OptionKind::grid) {
                row[opt.name] = opt.values[level];
            } else {
                row[opt.name] = opt.labels[level];
            }
        }
        row[fitness_column] = f;
        rows.push_back(std::move(row));
    });
    return rows.dump(1) + "\n";
}

}  // namespace confla
