#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "confla/config_space.hpp"
#include "confla/random.hpp"
#include "oracles.hpp"

using namespace confla;

namespace {

ConfigSpace cat23() {
    return ConfigSpace({OptionSpec::categorical("a", {"x", "y"}), OptionSpec::categorical("b", {"p", "q", "r"})},
                       Objective::maximize);
}

ConfigSpace grid5() { return ConfigSpace({OptionSpec::grid("g", {1, 2, 4, 8, 16})}, Objective::minimize); }

}  // namespace

TEST_CASE("encode of binary configurations") {
    const auto s = ConfigSpace::binary(3);
    CHECK(s.encode(std::vector<std::size_t>{0, 0, 0}) == 0);
    CHECK(s.encode(std::vector<std::size_t>{1, 1, 1}) == 7);
    CHECK(s.cardinality() == 8);
}

TEST_CASE("encode on a (2,3) space matches an enumeration of all six configurations") {
    const auto s = cat23();
    CHECK(s.encode(std::vector<std::size_t>{1, 2}) == 5);
    const oracle::Shape shape(s);
    std::set<ConfigId> seen;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            const std::vector<std::size_t> cfg{a, b};
            const auto id = s.encode(cfg);
            CHECK(id == shape.encode(cfg));
            CHECK(s.decode(id) == cfg);
            seen.insert(id);
        }
    }
    CHECK(seen == std::set<ConfigId>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("encode rejects out-of-range levels and wrong lengths") {
    const auto s = cat23();
    CHECK_THROWS_AS(s.encode(std::vector<std::size_t>{2, 0}), ValidationError);
    CHECK_THROWS_AS(s.encode(std::vector<std::size_t>{0, 3}), ValidationError);
    CHECK_THROWS_AS(s.encode(std::vector<std::size_t>{0}), ValidationError);
}

TEST_CASE("neighbors examples") {
    const auto b3 = ConfigSpace::binary(3);
    CHECK(b3.neighbors(0) == std::vector<ConfigId>{1, 2, 4});

    const auto g = grid5();
    CHECK(g.neighbors(2) == std::vector<ConfigId>{1, 3});
    CHECK(g.neighbors(0) == std::vector<ConfigId>{1});
    CHECK(g.neighbors(4) == std::vector<ConfigId>{3});

    const auto s = cat23();
    const auto nb = s.neighbors(0);
    CHECK(nb.size() == 3);
    std::vector<ConfigId> brute;
    for (ConfigId id = 0; id < s.cardinality(); ++id) {
        if (s.distance(0, id) == 1) brute.push_back(id);
    }
    CHECK(nb == brute);
}

TEST_CASE("distance examples") {
    const auto b3 = ConfigSpace::binary(3);
    CHECK(b3.distance(5, 5) == 0);
    CHECK(b3.distance(b3.encode(std::vector<std::size_t>{0, 0, 0}), b3.encode(std::vector<std::size_t>{1, 1, 0})) == 2);
    CHECK(grid5().distance(0, 4) == 4);
}

TEST_CASE("cardinality, diameter and radius") {
    const ConfigSpace s({OptionSpec::categorical("a", {"x", "y", "z"}), OptionSpec::grid("g", {1, 2, 3, 4})},
                        Objective::maximize);
    CHECK(s.cardinality() == 12);
    CHECK(s.diameter() == 4);
    CHECK(s.radius() == doctest::Approx(2.0));
}

TEST_CASE("option spec validation") {
    const auto space_of = [](OptionSpec o) { return ConfigSpace({std::move(o)}, Objective::maximize); };
    CHECK_THROWS_AS(space_of(OptionSpec::categorical("a", {"x"})), ValidationError);
    CHECK_THROWS_AS(space_of(OptionSpec::categorical("a", {"x", "x"})), ValidationError);
    CHECK_THROWS_AS(space_of(OptionSpec::grid("g", {1, 1})), ValidationError);
    CHECK_THROWS_AS(space_of(OptionSpec::grid("g", {2, 1})), ValidationError);
    CHECK_THROWS_AS(space_of(OptionSpec::categorical("", {"x", "y"})), ValidationError);
    CHECK_THROWS_AS(ConfigSpace({OptionSpec::categorical("a", {"x", "y"}), OptionSpec::categorical("a", {"x", "y"})},
                                Objective::maximize),
                    ValidationError);
}

TEST_CASE("cardinality overflow is rejected") {
    std::vector<OptionSpec> opts;
    for (int i = 0; i < 65; ++i) opts.push_back(OptionSpec::categorical("o" + std::to_string(i), {"0", "1"}));
    CHECK_THROWS_AS(ConfigSpace(opts, Objective::maximize), ValidationError);
}

TEST_CASE("config space JSON round trip and errors") {
    const auto text = R"({"objective": "min", "options": [
        {"name": "cache", "kind": "categorical", "levels": ["on", "off"]},
        {"name": "threads", "kind": "grid", "levels": [1, 2, 4, 8]}]})";
    const auto s = ConfigSpace::from_json_text(text);
    CHECK(s.objective() == Objective::minimize);
    CHECK(s.cardinality() == 8);
    CHECK(s.option(1).kind == OptionKind::grid);
    CHECK(s.option(1).find_level("4") == std::optional<std::size_t>{2});
    CHECK(s.option(1).find_level("4.0") == std::optional<std::size_t>{2});
    CHECK_FALSE(s.option(1).find_level("3").has_value());
    CHECK(s.option(0).find_level("off") == std::optional<std::size_t>{1});
    CHECK(ConfigSpace::from_json_text(s.to_json_text()) == s);

    CHECK_THROWS_AS(ConfigSpace::from_json_text("{"), ValidationError);
    CHECK_THROWS_AS(ConfigSpace::from_json_text(R"({"objective": "up", "options": []})"), ValidationError);
    CHECK_THROWS_AS(
        ConfigSpace::from_json_text(R"({"objective": "max", "options": [{"name": "a", "kind": "tree", "levels": [1, 2]}]})"),
        ValidationError);
}

TEST_CASE("property: neighborhoods of random mixed spaces") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = oracle::random_space(rng, 4096);
        const oracle::Shape shape(s);
        for (ConfigId id = 0; id < s.cardinality(); ++id) {
            const auto nb = s.neighbors(id);
            CHECK(nb == shape.neighbors(id));
            CHECK(nb.size() == s.neighbor_count(id));
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            std::size_t expected = 0;
            const auto cfg = s.decode(id);
            for (std::size_t k = 0; k < s.option_count(); ++k) {
                if (s.option(k).kind == OptionKind::categorical) {
                    expected += s.level_count(k) - 1;
                } else {
                    expected += (cfg[k] > 0 ? 1 : 0) + (cfg[k] + 1 < s.level_count(k) ? 1 : 0);
                }
            }
            CHECK(nb.size() == expected);
            for (auto n : nb) {
                CHECK(s.distance(id, n) == 1);
                const auto back = s.neighbors(n);
                CHECK(std::binary_search(back.begin(), back.end(), id));
            }
        }
    }
}

TEST_CASE("property: distance is a metric matching the oracle") {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = oracle::random_space(rng, 4096);
        const oracle::Shape shape(s);
        for (int i = 0; i < 200; ++i) {
            const auto a = rng.below(s.cardinality()), b = rng.below(s.cardinality()), c = rng.below(s.cardinality());
            CHECK(s.distance(a, b) == shape.distance(a, b));
            CHECK(s.distance(a, b) == s.distance(b, a));
            CHECK((s.distance(a, b) == 0) == (a == b));
            CHECK(s.distance(a, c) <= s.distance(a, b) + s.distance(b, c));
            CHECK(s.distance(a, b) <= s.diameter());
        }
    }
}

TEST_CASE("property: exhaustive encode/decode round trip up to 2^16") {
    const ConfigSpace big({OptionSpec::categorical("a", {"0", "1", "2", "3"}), OptionSpec::grid("b", {1, 2, 3, 4, 5, 6, 7, 8}),
                           OptionSpec::categorical("c", {"x", "y"}), OptionSpec::grid("d", {0, 1, 2, 3, 4, 5, 6, 7}),
                           OptionSpec::categorical("e", {"0", "1", "2", "3", "4", "5", "6", "7"}),
                           OptionSpec::categorical("f", {"0", "1", "2", "3"}), OptionSpec::grid("g", {1, 2, 3, 4})},
                          Objective::maximize);
    REQUIRE(big.cardinality() == 65536);
    const oracle::Shape shape(big);
    bool ok = true;
    for (ConfigId id = 0; id < big.cardinality(); ++id) {
        const auto cfg = big.decode(id);
        ok = ok && big.encode(cfg) == id && shape.encode(cfg) == id;
        for (std::size_t k = 0; k < big.option_count(); ++k) ok = ok && big.level_of(id, k) == cfg[k];
    }
    CHECK(ok);
}
