#include "confla/export.hpp"

#include <cmath>

#include "confla/error.hpp"
#include "confla/numeric_text.hpp"

namespace confla {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string config_text(const ConfigSpace& space, ConfigId id) {
    std::string out;
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        if (k) out += ';';
        out += space.option(k).name + '=' + space.option(k).level_text(space.level_of(id, k));
    }
    return out;
}

const char* graphml_head =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
    "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
    "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
    "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
    "  <key id=\"config\" for=\"node\" attr.name=\"config\" attr.type=\"string\"/>\n"
    "  <key id=\"fitness\" for=\"node\" attr.name=\"fitness\" attr.type=\"double\"/>\n"
    "  <key id=\"isLocalOptimum\" for=\"node\" attr.name=\"isLocalOptimum\" attr.type=\"boolean\"/>\n"
    "  <key id=\"basinSize\" for=\"node\" attr.name=\"basinSize\" attr.type=\"long\"/>\n"
    "  <key id=\"attractor\" for=\"node\" attr.name=\"attractor\" attr.type=\"long\"/>\n"
    "  <key id=\"neutral\" for=\"edge\" attr.name=\"neutral\" attr.type=\"boolean\"/>\n"
    "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";

void graphml_node(std::string& out, std::uint64_t index, const std::string& config, double fitness, bool optimum,
                  std::uint64_t basin_size, std::int64_t attractor) {
    out += "    <node id=\"n" + std::to_string(index) + "\">";
    out += "<data key=\"config\">" + xml_escape(config) + "</data>";
    out += "<data key=\"fitness\">" + format_double(fitness) + "</data>";
    out += std::string("<data key=\"isLocalOptimum\">") + (optimum ? "true" : "false") + "</data>";
    out += "<data key=\"basinSize\">" + std::to_string(basin_size) + "</data>";
    out += "<data key=\"attractor\">" + std::to_string(attractor) + "</data>";
    out += "</node>\n";
}

void dot_node(std::string& out, std::uint64_t index, const std::string& config, double fitness, bool optimum,
              std::uint64_t basin_size, std::int64_t attractor) {
    out += "  n" + std::to_string(index) + " [config=\"" + dot_escape(config) + "\", fitness=" + format_double(fitness) +
           ", isLocalOptimum=" + (optimum ? "true" : "false") + ", basinSize=" + std::to_string(basin_size) +
           ", attractor=" + std::to_string(attractor) + (optimum ? ", shape=doublecircle" : "") + "];\n";
}

}  // namespace

std::string export_landscape(const Landscape& l, const BasinAssignment& basins, GraphFormat format,
                             std::uint64_t size_guard) {
    const auto& space = l.space();
    if (space.cardinality() > size_guard) {
        throw ValidationError("landscape has " + std::to_string(space.cardinality()) +
                              " configurations, above the export size guard of " + std::to_string(size_guard) +
                              "; export the local optima network instead (--what lon)");
    }
    l.require_complete("export");
    if (basins.attractor.size() != space.cardinality()) {
        throw ValidationError("basin assignment does not match the landscape");
    }
    std::vector<std::uint64_t> basin_size(space.cardinality(), 0);
    std::vector<bool> optimum(space.cardinality(), false);
    for (std::size_t i = 0; i < basins.basins.size(); ++i) {
        basin_size[basins.basins[i].optimum] = basins.basins[i].size;
        optimum[basins.basins[i].optimum] = true;
    }
    const auto dense = l.dense();
    const bool graphml = format == GraphFormat::graphml;
    std::string out;
    if (graphml) {
        out += graphml_head;
        out += "  <graph id=\"landscape\" edgedefault=\"directed\">\n";
    } else {
        out += "digraph landscape {\n";
    }
    for (ConfigId id = 0; id < space.cardinality(); ++id) {
        const auto attractor =
            basins.attractor[id] == kNoOptimum ? std::int64_t{-1} : static_cast<std::int64_t>(basins.attractor[id]);
        (graphml ? graphml_node : dot_node)(out, id, config_text(space, id), dense[id], optimum[id], basin_size[id],
                                            attractor);
    }
    for (ConfigId id = 0; id < space.cardinality(); ++id) {
        space.for_each_neighbor(id, [&](ConfigId nb) {
            if (nb < id) return;  // each neighbor pair once
            const auto who = fitter(l, id, nb);
            const bool neutral = who == Fitter::tie;
            const ConfigId from = who == Fitter::a ? nb : id;
            const ConfigId to = who == Fitter::a ? id : nb;
            if (graphml) {
                out += "    <edge source=\"n" + std::to_string(from) + "\" target=\"n" + std::to_string(to) +
                       "\"><data key=\"neutral\">" + (neutral ? "true" : "false") + "</data></edge>\n";
            } else {
                out += "  n" + std::to_string(from) + " -> n" + std::to_string(to) +
                       (neutral ? " [neutral=true, dir=none]" : "") + ";\n";
            }
        });
    }
    out += graphml ? "  </graph>\n</graphml>\n" : "}\n";
    return out;
}

std::string export_lon(const LocalOptimaNetwork& lon, GraphFormat format) {
    const bool graphml = format == GraphFormat::graphml;
    std::string out;
    if (graphml) {
        out += graphml_head;
        out += "  <graph id=\"lon\" edgedefault=\"directed\">\n";
    } else {
        out += "digraph lon {\n";
    }
    for (std::size_t i = 0; i < lon.vertices.size(); ++i) {
        const auto& v = lon.vertices[i];
        (graphml ? graphml_node : dot_node)(out, i, std::to_string(v.id), v.fitness, true, v.basin_size,
                                            static_cast<std::int64_t>(v.id));
    }
    for (const auto& e : lon.edges) {
        if (graphml) {
            out += "    <edge source=\"n" + std::to_string(e.from) + "\" target=\"n" + std::to_string(e.to) +
                   "\"><data key=\"weight\">" + std::to_string(e.weight) + "</data></edge>\n";
        } else {
            out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) +
                   " [weight=" + std::to_string(e.weight) + "];\n";
        }
    }
    out += graphml ? "  </graph>\n</graphml>\n" : "}\n";
    return out;
}

std::string export_interactions(const ConfigSpace& space, const InteractionMatrix& m) {
    std::string out = "graph interactions {\n";
    for (std::size_t k = 0; k < space.option_count(); ++k) {
        out += "  o" + std::to_string(k) + " [label=\"" + dot_escape(space.option(k).name) + "\"];\n";
    }
    for (const auto& p : m.pairs) {
        if (!p.significant || p.sign() == 0) continue;
        const bool positive = p.sign() > 0;
        out += "  o" + std::to_string(p.i) + " -- o" + std::to_string(p.j) + " [epsilon=" + format_double(p.mean) +
               ", weight=" + format_double(std::abs(p.mean)) + ", sign=" + (positive ? "positive" : "negative") +
               ", color=" + (positive ? "blue" : "red") + "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace confla
