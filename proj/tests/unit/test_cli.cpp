#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <cstdlib>
#include <sstream>

#include "confla/cli.hpp"
#include "confla/landscape.hpp"
#include "confla/surrogate.hpp"
#include "confla/synthetic.hpp"
#include "oracles.hpp"

using namespace confla;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "confla");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Writes an NK landscape and its space; returns {space, data}.
std::pair<std::string, std::string> nk_files(const fs::path& dir, std::size_t n, std::size_t k, std::uint64_t seed) {
    const auto space = (dir / ("space" + std::to_string(n) + ".json")).string();
    const auto data = (dir / ("nk" + std::to_string(n) + "_" + std::to_string(k) + "_" + std::to_string(seed) + ".csv"))
                          .string();
    const auto r = cli({"--seed", std::to_string(seed), "--quiet", "generate", "nk", "--n", std::to_string(n), "--k",
                        std::to_string(k), "--out", data, "--space-out", space});
    REQUIRE(r.code == 0);
    return {space, data};
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++c;
    return c;
}

}  // namespace

TEST_CASE("generate writes the library's landscape") {
    const auto dir = oracle::temp_dir("cli_generate");
    const auto [space, data] = nk_files(dir, 6, 2, 3);
    const auto l = load_table(ConfigSpace::load(space), data, "fitness");
    const auto ref = generate_nk({6, 2, NKNeighborModel::adjacent, 3});
    REQUIRE(l.complete());
    for (ConfigId id = 0; id < 64; ++id) CHECK(l.fitness(id) == ref.fitness(id));
    const auto again = dir / "again.csv";
    CHECK(cli({"--seed", "3", "--quiet", "generate", "nk", "--n", "6", "--k", "2", "--out", again.string(), "--space-out",
               (dir / "s2.json").string()})
              .code == 0);
    CHECK(oracle::read_file(again) == oracle::read_file(data));
    CHECK(cli({"--quiet", "generate", "nk", "--n", "6", "--k", "2", "--out", again.string(), "--space-out",
               (dir / "s2.json").string()})
              .code == kExitValidation);
    CHECK(cli({"--seed", "1", "--quiet", "generate", "nk", "--n", "4", "--k", "4", "--out", again.string(),
               "--space-out", (dir / "s2.json").string()})
              .code == kExitValidation);
}

TEST_CASE("analyze metric selection and preconditions") {
    const auto dir = oracle::temp_dir("cli_analyze");
    const auto [space, data] = nk_files(dir, 3, 1, 1);
    const auto r = cli({"--quiet", "analyze", "--space", space, "--data", data, "--metrics", "distribution"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["results"].size() == 1);
    CHECK(doc["results"].contains("distribution"));
    CHECK(doc["results"]["distribution"]["stored"] == 8);

    const auto partial = dir / "partial.csv";
    auto text = oracle::read_file(data);
    text = text.substr(0, text.rfind('\n', text.size() - 2) + 1);  // drop the last row
    oracle::write_file(partial, text);
    const auto bad = cli({"--seed", "1", "--quiet", "analyze", "--space", space, "--data", partial.string()});
    CHECK(bad.code == kExitPrecondition);
    CHECK(bad.err.find("effects requires a complete landscape") != std::string::npos);
    CHECK(bad.err.find("basins requires a complete landscape") != std::string::npos);
    const auto dist = cli({"--quiet", "analyze", "--space", space, "--data", partial.string(), "--metrics", "distribution"});
    CHECK(dist.code == 0);
    CHECK(json::parse(dist.out)["results"]["distribution"]["complete"] == false);

    CHECK(cli({"--quiet", "analyze", "--space", space, "--data", data, "--metrics", "nonsense"}).code == kExitValidation);
    const auto noseed = cli({"--quiet", "analyze", "--space", space, "--data", data, "--metrics", "lon"});
    CHECK(noseed.code == kExitValidation);
    CHECK(noseed.err.find("--seed") != std::string::npos);
    CHECK(cli({"--quiet", "analyze", "--space", (dir / "missing.json").string(), "--data", data}).code ==
          kExitValidation);
    const auto small = cli({"--seed", "1", "--quiet", "analyze", "--space", space, "--data", data, "--metrics",
                            "prominent"});
    CHECK(small.code == kExitPrecondition);
    CHECK(small.err.find("prominent") != std::string::npos);

    const auto garbage = dir / "garbage.csv";
    oracle::write_file(garbage, "x0,x1,x2,fitness\n0,0,7,1.0\n");
    const auto g = cli({"--quiet", "analyze", "--space", space, "--data", garbage.string(), "--metrics", "distribution"});
    CHECK(g.code == kExitValidation);
}

TEST_CASE("full analysis is deterministic and decomposes into per-metric runs") {
    const auto dir = oracle::temp_dir("cli_full");
    const auto [space, data] = nk_files(dir, 12, 3, 5);
    const std::vector<std::string> base{"--seed", "5", "--quiet", "analyze", "--space", space, "--data", data,
                                        "--walks", "20", "--walk-length", "500"};
    const auto a = cli(base), b = cli(base);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto threaded = base;
    threaded.insert(threaded.begin(), {"--threads", "3"});
    CHECK(cli(threaded).out == a.out);

    const auto full = json::parse(a.out);
    for (const auto& m : {"distribution", "prominent", "local_optima", "distance_to_global", "basins", "lon",
                          "autocorrelation", "effects", "interactions"}) {
        auto args = base;
        args.insert(args.end(), {"--metrics", m});
        const auto one = cli(args);
        REQUIRE(one.code == 0);
        const auto doc = json::parse(one.out);
        CHECK(doc["results"].size() == 1);
        CHECK(doc["results"][m] == full["results"][m]);
        for (const auto& [k, v] : doc["seeds"].items()) CHECK(full["seeds"][k] == v);
    }
    CHECK(full["seeds"].contains("lon"));
    CHECK(full["seeds"].contains("autocorrelation"));
    CHECK(full["budgets"]["walks"] == 20);
}

TEST_CASE("environment budgets are echoed into the report") {
    const auto dir = oracle::temp_dir("cli_env");
    const auto [space, data] = nk_files(dir, 6, 2, 2);
    ::setenv("CONFLA_WALKS", "7", 1);
    const auto r = cli({"--seed", "1", "--quiet", "analyze", "--space", space, "--data", data, "--metrics",
                        "autocorrelation", "--walk-length", "50"});
    ::setenv("CONFLA_WALKS", "zero", 1);
    const auto bad = cli({"--seed", "1", "--quiet", "analyze", "--space", space, "--data", data, "--metrics",
                          "autocorrelation"});
    ::unsetenv("CONFLA_WALKS");
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["budgets"]["walks"] == 7);
    CHECK(doc["environment"]["CONFLA_WALKS"] == "7");
    CHECK(bad.code == kExitValidation);
}

TEST_CASE("compare emits every pair and matches single-pair runs") {
    const auto dir = oracle::temp_dir("cli_compare");
    std::vector<std::string> files;
    std::string space;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto f = nk_files(dir, 7, 2, seed);
        space = f.first;
        files.push_back(f.second);
    }
    std::vector<std::string> args{"--seed", "9", "--quiet", "compare", "--space", space, "--data"};
    args.insert(args.end(), files.begin(), files.end());
    const auto all = cli(args);
    REQUIRE(all.code == 0);
    const auto doc = json::parse(all.out)["results"]["compare"];
    CHECK(doc["pairs"].size() == 6);
    for (const auto& pair : doc["pairs"]) {
        const std::size_t a = pair["a"], b = pair["b"];
        const auto single = cli({"--seed", "9", "--quiet", "compare", "--space", space, "--data", files[a], files[b]});
        REQUIRE(single.code == 0);
        auto one = json::parse(single.out)["results"]["compare"]["pairs"][0];
        one.erase("a");
        one.erase("b");
        auto p = pair;
        p.erase("a");
        p.erase("b");
        CHECK(one == p);
        CHECK(doc["matrices"]["spearman"][a][b] == pair["correlation"]["spearman"]);
        CHECK(doc["matrices"]["spearman"][b][a] == pair["correlation"]["spearman"]);
    }

    const auto three = cli({"--seed", "9", "--quiet", "compare", "--space", space, "--data", files[0], files[1], files[2]});
    CHECK(json::parse(three.out)["results"]["compare"]["pairs"].size() == 3);

    const auto same = cli({"--seed", "9", "--quiet", "compare", "--space", space, "--data", files[0], files[0]});
    const auto id = json::parse(same.out)["results"]["compare"]["pairs"][0];
    CHECK(id["correlation"]["spearman"] == 1.0);
    CHECK(id["top_region"]["jaccard"] == 1.0);
    CHECK(id["top_region"]["shake_up_ab"] == 0.0);
    CHECK(id["local_optima"]["jaccard"] == 1.0);
    CHECK(id["local_optima"]["emd"] == 0.0);
    CHECK(id["global_optimum"]["distance"] == 0);
    CHECK(id["consistency"]["importance_spearman"] == 1.0);

    CHECK(cli({"--seed", "9", "--quiet", "compare", "--space", space, "--data", files[0]}).code == kExitValidation);
    const auto other = nk_files(dir, 6, 2, 1);
    CHECK(cli({"--seed", "9", "--quiet", "compare", "--space", space, "--data", files[0], other.second}).code ==
          kExitValidation);
}

TEST_CASE("export graphs") {
    const auto dir = oracle::temp_dir("cli_export");
    const auto space = (dir / "s3.json").string(), data = (dir / "add.csv").string();
    REQUIRE(cli({"--quiet", "generate", "additive", "--n", "3", "--weights", "1,2,4", "--out", data, "--space-out",
                 space})
                .code == 0);
    const auto g = dir / "add.graphml";
    REQUIRE(cli({"--quiet", "export", "--space", space, "--data", data, "--out", g.string()}).code == 0);
    const auto text = oracle::read_file(g);
    CHECK(count(text, "<node ") == 8);
    CHECK(count(text, "<edge ") == 12);
    CHECK(count(text, "<data key=\"isLocalOptimum\">true</data>") == 1);

    const auto lon = dir / "lon.graphml";
    REQUIRE(cli({"--seed", "1", "--quiet", "export", "--space", space, "--data", data, "--what", "lon", "--out",
                 lon.string()})
                .code == 0);
    CHECK(count(oracle::read_file(lon), "<node ") == 1);

    const auto dot = dir / "add.dot";
    REQUIRE(cli({"--quiet", "export", "--space", space, "--data", data, "--format", "dot", "--out", dot.string()})
                .code == 0);
    CHECK(count(oracle::read_file(dot), "->") == 12);

    const auto guard = cli({"--quiet", "export", "--space", space, "--data", data, "--size-guard", "4", "--out",
                            (dir / "x.graphml").string()});
    CHECK(guard.code == kExitValidation);
    CHECK(guard.err.find("--what lon") != std::string::npos);
}

TEST_CASE("surrogate predictions drive the optimizer") {
    const auto dir = oracle::temp_dir("cli_surrogate");
    const auto [space, data] = nk_files(dir, 8, 2, 4);
    const auto preds = dir / "pred.csv";
    const auto r = cli({"--seed", "2", "--quiet", "surrogate", "--space", space, "--data", data, "--model", "tree",
                        "--train-fraction", "0.5", "--max-depth", "5", "--predictions-out", preds.string(),
                        "--recall-k", "5", "--recall-n", "20"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out)["results"]["surrogate"];
    CHECK(doc["train_size"] == 128);
    const auto table = PredictionTable::load(preds);
    CHECK(table.size() == 256);

    const auto lasso = cli({"--seed", "2", "--quiet", "surrogate", "--space", space, "--data", data, "--model",
                            "lasso", "--degree-cap", "2", "--lambda", "0.001"});
    REQUIRE(lasso.code == 0);
    CHECK(cli({"--seed", "2", "--quiet", "surrogate", "--space", space, "--data", data, "--model", "lasso",
               "--degree-cap", "8", "--max-columns", "10"})
              .code == kExitValidation);

    const auto traj = dir / "traj.csv";
    const auto o = cli({"--seed", "3", "--quiet", "optimize", "--space", space, "--data", data, "--algo", "sa",
                        "--runs", "2", "--iterations", "100", "--oracle", "surrogate:" + preds.string(),
                        "--trajectory-out", traj.string()});
    REQUIRE(o.code == 0);
    const auto rows = oracle::read_file(traj);
    CHECK(count(rows, "\n") == 1 + 2 * 101);
    CHECK(rows.rfind("run,iteration,config_id,oracle_fitness,true_fitness,best_so_far\n", 0) == 0);

    // A prediction file holding the true fitness reproduces the true-oracle runs.
    const auto l = load_table(ConfigSpace::load(space), data, "fitness");
    const auto exact = dir / "exact.csv";
    std::vector<std::pair<ConfigId, double>> truth;
    for (ConfigId id = 0; id < 256; ++id) truth.emplace_back(id, l.fitness(id));
    oracle::write_file(exact, predictions_csv(PredictionTable(truth), l.ids()));
    const std::vector<std::string> sa{"--seed", "3", "--quiet", "optimize", "--space", space, "--data", data,
                                      "--algo", "sa", "--runs", "3", "--iterations", "300"};
    auto with_true = sa, with_file = sa;
    with_file.insert(with_file.end(), {"--oracle", "surrogate:" + exact.string()});
    const auto t = json::parse(cli(with_true).out)["results"]["optimize"]["runs"];
    const auto f = json::parse(cli(with_file).out)["results"]["optimize"]["runs"];
    REQUIRE(t.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t[i]["trajectory"]["final_id"] == f[i]["trajectory"]["final_id"]);
        CHECK(t[i]["trajectory"]["accepted"] == f[i]["trajectory"]["accepted"]);
    }

    const auto hc = cli({"--quiet", "optimize", "--space", space, "--data", data, "--algo", "hc", "--start", "0"});
    CHECK(hc.code == 0);
    CHECK(cli({"--quiet", "optimize", "--space", space, "--data", data, "--algo", "sa"}).code == kExitValidation);
    CHECK(cli({"--seed", "1", "--quiet", "optimize", "--space", space, "--data", data, "--algo", "ga"}).code ==
          kExitValidation);
}

TEST_CASE("build averages duplicates and reports them") {
    const auto dir = oracle::temp_dir("cli_build");
    const auto space = dir / "s.json";
    oracle::write_file(space, ConfigSpace::binary(2).to_json_text());
    const auto data = dir / "d.csv";
    oracle::write_file(data, "x0,x1,fitness\n0,0,1\n0,0,3\n1,0,2\n0,1,4\n1,1,5\n");
    const auto norm = dir / "n.csv";
    const auto r = cli({"--quiet", "build", "--space", space.string(), "--data", data.string(), "--out", norm.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("duplicate") != std::string::npos);
    const auto l = load_table(ConfigSpace::binary(2), norm, "fitness");
    CHECK(l.fitness(0) == 2.0);
    CHECK(l.size() == 4);
}

TEST_CASE("usage errors map to the validation exit code") {
    CHECK(cli({}).code == kExitValidation);
    CHECK(cli({"frobnicate"}).code == kExitValidation);
    CHECK(cli({"analyze"}).code == kExitValidation);
    CHECK(cli({"--threads", "0", "analyze"}).code == kExitValidation);
    CHECK(cli({"--help"}).code == kExitOk);
}
