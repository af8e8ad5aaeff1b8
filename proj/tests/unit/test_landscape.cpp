#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <string>

#include "confla/landscape.hpp"
#include "confla/metrics.hpp"
#include "oracles.hpp"

using namespace confla;

namespace {

std::string binary_csv(bool duplicate) {
    std::string text = "x0,x1,x2,perf\n";
    for (int id = 0; id < 8; ++id) {
        const std::string cfg =
            std::to_string(id & 1) + "," + std::to_string((id >> 1) & 1) + "," + std::to_string((id >> 2) & 1);
        if (duplicate) {
            text += cfg + "," + std::to_string(id) + "\n";
            text += cfg + "," + std::to_string(id + 2) + "\n";
        } else {
            text += cfg + "," + std::to_string(id * 1.5) + "\n";
        }
    }
    return text;
}

}  // namespace

TEST_CASE("complete enumeration loads as a complete landscape") {
    const auto l = parse_csv(ConfigSpace::binary(3), binary_csv(false), "perf");
    CHECK(l.complete());
    CHECK(l.size() == 8);
    CHECK(l.meta().rows == 8);
    CHECK(l.meta().duplicates == 0);
    for (ConfigId id = 0; id < 8; ++id) CHECK(l.fitness(id) == doctest::Approx(id * 1.5));
}

TEST_CASE("duplicate rows are averaged") {
    const auto l = parse_csv(ConfigSpace::binary(3), binary_csv(true), "perf");
    CHECK(l.complete());
    CHECK(l.meta().duplicates == 8);
    for (ConfigId id = 0; id < 8; ++id) CHECK(l.fitness(id) == static_cast<double>(id) + 1.0);
}

TEST_CASE("ingest validation errors") {
    const auto s = ConfigSpace::binary(3);
    CHECK_THROWS_WITH_AS(parse_csv(s, "x0,x1,x2,perf\n7,0,0,1\n", "perf"), doctest::Contains("undeclared level"),
                         ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,perf\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,perf\n0,0,1\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,time\n0,0,0,1\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,perf\n0,0,0,nan\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,perf\n0,0,0,inf\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,perf\n0,0,0,abc\n", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_csv(s, "x0,x1,x2,perf\n0,0,0\n", "perf"), ValidationError);
}

TEST_CASE("column order, extra columns, CRLF and quoting") {
    const ConfigSpace s({OptionSpec::categorical("mode", {"a,b", "c"}), OptionSpec::grid("n", {1, 2, 4})},
                        Objective::minimize);
    const std::string text = "run,n,perf,mode\r\n1,4,2.5,\"a,b\"\r\n1,1,3.25,c\r\n";
    const auto l = parse_csv(s, text, "perf");
    CHECK_FALSE(l.complete());
    CHECK(l.size() == 2);
    CHECK(l.fitness(s.encode(std::vector<std::size_t>{0, 2})) == 2.5);
    CHECK(l.fitness(s.encode(std::vector<std::size_t>{1, 0})) == 3.25);
    CHECK_THROWS_AS(l.fitness(0), PreconditionError);
    CHECK_THROWS_AS(l.require_complete("effects"), PreconditionError);
}

TEST_CASE("CSV and JSON round trips") {
    const ConfigSpace s({OptionSpec::categorical("mode", {"fast", "safe"}), OptionSpec::grid("n", {0.5, 1, 2})},
                        Objective::maximize);
    Rng rng(3);
    const auto l = oracle::random_landscape(s, rng, false);
    const auto csv = to_csv(l, "perf");
    const auto back = parse_csv(s, csv, "perf");
    REQUIRE(back.complete());
    for (ConfigId id = 0; id < s.cardinality(); ++id) CHECK(back.fitness(id) == l.fitness(id));

    const auto js = to_json_rows(l, "perf");
    const auto back2 = parse_json(s, js, "perf");
    REQUIRE(back2.complete());
    for (ConfigId id = 0; id < s.cardinality(); ++id) CHECK(back2.fitness(id) == l.fitness(id));

    CHECK_THROWS_AS(parse_json(s, R"([{"mode": "slow", "n": 1, "perf": 1}])", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_json(s, R"([{"mode": "fast", "perf": 1}])", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_json(s, R"({})", "perf"), ValidationError);
    CHECK_THROWS_AS(parse_json(s, R"([])", "perf"), ValidationError);
}

TEST_CASE("load_csv from files is deterministic") {
    const auto dir = oracle::temp_dir("landscape_files");
    oracle::write_file(dir / "space.json", ConfigSpace::binary(3).to_json_text());
    oracle::write_file(dir / "data.csv", binary_csv(true));
    const auto a = load_csv(dir / "space.json", dir / "data.csv", "perf");
    const auto b = load_csv(dir / "space.json", dir / "data.csv", "perf");
    REQUIRE(a.complete());
    for (ConfigId id = 0; id < 8; ++id) CHECK(std::bit_cast<std::uint64_t>(a.fitness(id)) == std::bit_cast<std::uint64_t>(b.fitness(id)));
    CHECK_THROWS_AS(load_csv(dir / "space.json", dir / "missing.csv", "perf"), ValidationError);
}

TEST_CASE("fitter respects the objective") {
    const auto mk = [](Objective o) {
        return Landscape(ConfigSpace({OptionSpec::categorical("a", {"0", "1", "2"})}, o), std::vector<double>{1.0, 2.0, 2.0});
    };
    CHECK(fitter(mk(Objective::minimize), 0, 1) == Fitter::a);
    CHECK(fitter(mk(Objective::maximize), 0, 1) == Fitter::b);
    CHECK(fitter(mk(Objective::maximize), 1, 2) == Fitter::tie);
    CHECK(fitter(mk(Objective::minimize), 1, 2) == Fitter::tie);

    const Landscape partial(ConfigSpace::binary(2), std::vector<std::pair<ConfigId, double>>{{0, 1.0}});
    CHECK_THROWS_AS(fitter(partial, 0, 1), PreconditionError);
}

TEST_CASE("landscape construction validation") {
    const auto s = ConfigSpace::binary(2);
    CHECK_THROWS_AS(Landscape(s, std::vector<double>{1, 2, 3}), ValidationError);
    CHECK_THROWS_AS(Landscape(s, std::vector<double>{1, 2, 3, NAN}), ValidationError);
    CHECK_THROWS_AS(Landscape(s, std::vector<std::pair<ConfigId, double>>{{0, 1.0}, {0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(Landscape(s, std::vector<std::pair<ConfigId, double>>{{4, 1.0}}), ValidationError);
    const Landscape full(s, std::vector<std::pair<ConfigId, double>>{{3, 1.0}, {0, 2.0}, {1, 0.0}, {2, 5.0}});
    CHECK(full.complete());
    CHECK(full.fitness(2) == 5.0);
}

TEST_CASE("property: implicit edges match a materialized edge list") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = oracle::random_space(rng, 4096);
        const auto l = oracle::random_landscape(s, rng, trial % 2 == 0);
        const oracle::Shape shape(s);
        // Materialize every unordered neighbor pair from the oracle.
        std::vector<std::pair<ConfigId, ConfigId>> edges;
        for (ConfigId a = 0; a < shape.size(); ++a) {
            for (auto b : shape.neighbors(a)) {
                if (a < b) edges.emplace_back(a, b);
            }
        }
        std::vector<std::pair<ConfigId, ConfigId>> implied;
        for (ConfigId a = 0; a < s.cardinality(); ++a) {
            s.for_each_neighbor(a, [&](ConfigId b) {
                if (a < b) implied.emplace_back(a, b);
            });
        }
        std::sort(implied.begin(), implied.end());
        CHECK(implied == edges);
        // Sinks of the materialized oriented edges are the local optima.
        std::vector<int> out_degree(shape.size(), 0), tie_degree(shape.size(), 0);
        for (const auto& [a, b] : edges) {
            const auto w = fitter(l, a, b);
            if (w == Fitter::tie) {
                ++tie_degree[a];
                ++tie_degree[b];
            } else {
                ++out_degree[w == Fitter::a ? b : a];
            }
        }
        std::vector<ConfigId> sinks;
        for (ConfigId id = 0; id < shape.size(); ++id) {
            if (out_degree[id] == 0 && tie_degree[id] == 0) sinks.push_back(id);
        }
        CHECK(find_local_optima(l).optima == sinks);
    }
}
