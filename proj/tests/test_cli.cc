#include "doctest.h"

#include "support/fixtures.h"

#include "htn/bench.h"
#include "htn/cli.h"
#include "htn/families.h"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace htn;
using namespace htn::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "htn");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, HTN_DATA_DIR);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    fs::path p = fs::temp_directory_path() / "htn_cli_tests";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

const std::string kDomain = data_path("rover/domain.pddl");
const std::string kFig1 = data_path("rover/fig1.pddl");

} // namespace

TEST_CASE("agile score") {
    CHECK(agile_score(5.0, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(agile_score(50.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
    // Times under a second count as one second.
    CHECK(agile_score(0.2, 0.01) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(agile_score(10.0, 0.01) == doctest::Approx(0.5).epsilon(1e-12));

    const auto s = agile_scores({{"ishop", 20.0}, {"shop", 2.0}, {"other", std::nullopt}});
    CHECK(s.at("shop") == doctest::Approx(1.0));
    CHECK(s.at("ishop") == doctest::Approx(0.5));
    CHECK(s.at("other") == 0.0);

    const auto none = agile_scores({{"ishop", std::nullopt}, {"shop", std::nullopt}});
    CHECK(none.at("ishop") == 0.0);
    CHECK(none.at("shop") == 0.0);
}

TEST_CASE("agile score decreases strictly with time") {
    for (double best : {1.0, 3.0, 40.0}) {
        double previous = 2.0;
        for (double t = best; t < 1000 * best; t *= 1.37) {
            const double s = agile_score(t, best);
            CHECK(s < previous);
            CHECK(s > 0.0);
            previous = s;
        }
    }
}

TEST_CASE("solve prints the plan and writes stats") {
    const fs::path stats = temp_dir() / "stats.json";
    const CliRun r = cli({"solve", kDomain, kFig1, "--planner", "ishop", "--stats", stats.string()});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "(navigate rover1 waypoint3 waypoint1)\n(sample_rock rover1 rover1store waypoint1)\n"
          "(communicate_rock_data rover1 general waypoint1 waypoint1 waypoint0)\n");
    const auto j = nlohmann::json::parse(slurp(stats));
    for (const char *key : {"parse_ms", "ground_ms", "search_ms", "total_ms", "actions_before",
                            "actions_after", "methods_before", "methods_after",
                            "nodes_expanded", "plan_length", "exit_status"})
        CHECK(j.contains(key));
    CHECK(j["plan_length"] == 3);
    CHECK(j["exit_status"] == 0);
    CHECK(j["total_ms"].get<double>() >=
          j["parse_ms"].get<double>() + j["ground_ms"].get<double>() + j["search_ms"].get<double>());
}

TEST_CASE("solve exit codes") {
    CHECK(cli({"solve", kDomain, kFig1, "--timeout", "0"}).code == 2);
    for (const char *planner : {"ishop", "shop"}) {
        CHECK(cli({"solve", kDomain, data_path("rover/fig1_unsolvable.pddl"), "--planner", planner})
                  .code == 1);
        CHECK(cli({"solve", kDomain, kFig1, "--planner", planner}).code == 0);
    }
    CHECK(cli({"solve", kDomain, "no/such/file.pddl"}).code == 3);
    CHECK(cli({"solve", kDomain, kFig1, "--planner", "fd"}).code == 3);
    CHECK(cli({"frobnicate"}).code == 3);
    CHECK(cli({"solve", kDomain, kFig1, "--depth", "1"}).code == 1);
}

TEST_CASE("solve, then validate the plan and the trace") {
    const fs::path plan = temp_dir() / "plan.txt";
    const fs::path trace = temp_dir() / "trace.txt";
    REQUIRE(cli({"solve", kDomain, kFig1, "-o", plan.string(), "--trace", trace.string()}).code ==
            0);
    CHECK(cli({"validate", kDomain, kFig1, plan.string()}).out == "valid\n");
    CHECK(cli({"validate", kDomain, kFig1, plan.string(), "--trace", trace.string()}).code == 0);

    std::ofstream(plan) << "(sample_rock rover1 rover1store waypoint1)\n";
    const CliRun bad = cli({"validate", kDomain, kFig1, plan.string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.rfind("invalid:", 0) == 0);
}

TEST_CASE("ground and estimate") {
    const CliRun g = cli({"ground", kDomain, kFig1});
    CHECK(g.code == 0);
    CHECK(g.out.find("  can_traverse both\n") != std::string::npos);
    CHECK(g.out.find("propositions") != std::string::npos);

    const std::string d14 = data_path("synthetic/estimate14m.pddl");
    const std::string p14 = data_path("synthetic/estimate14m_problem.pddl");
    const CliRun e = cli({"estimate", d14, p14});
    CHECK(e.code == 0);
    CHECK(e.out == "communicate_soil_data 14000000\ntotal 14000000\n");
    CHECK(cli({"ground", "--estimate-only", d14, p14}).out == e.out);
}

TEST_CASE("no-method-fixpoint flag") {
    const std::string d = data_path("synthetic/chain.pddl");
    const std::string p = data_path("synthetic/chain_problem.pddl");
    CHECK(cli({"ground", d, p}).out.find("methods 4 -> 0\n") != std::string::npos);
    CHECK(cli({"ground", d, p, "--no-method-fixpoint"}).out.find("methods 4 -> 2\n") !=
          std::string::npos);
}

TEST_CASE("bench on a single problem") {
    const fs::path manifest = temp_dir() / "one.json";
    std::ofstream(manifest) << R"({"planners": ["ishop", "shop"], "timeout": 30, "problems": [
        {"domain": ")" << kDomain << R"(", "problem": ")" << kFig1 << R"(", "group": "rover"}]})";
    const CliRun r = cli({"bench", manifest.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("domain rover\n") != std::string::npos);
    CHECK(r.out.find("fig1 ") != std::string::npos);
    CHECK(r.out.find("series rover ishop length 3\n") != std::string::npos);
}

TEST_CASE("bench: a planner that always times out scores 0") {
    Manifest m;
    m.timeout_seconds = 30;
    m.planner_timeouts["shop"] = 0;
    for (int size = 1; size <= 3; ++size)
        m.entries.push_back(ManifestEntry{"rover-" + std::to_string(size), "rover",
                                          data_path("rover/domain.pddl"), "", "rover", size});
    const BenchResult r = run_bench(m, RunOptions{});
    double ishop = 0;
    double shop = 0;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        CHECK(r.runs[i][1].status == "timeout");
        ishop += r.scores[i][0];
        shop += r.scores[i][1];
    }
    CHECK(ishop == doctest::Approx(3.0));
    CHECK(shop == 0.0);
    const std::string text = format_bench(r);
    CHECK(text.find("timeout") != std::string::npos);
}

TEST_CASE("bench over the three families gives three tables") {
    Manifest m;
    m.timeout_seconds = 60;
    for (const auto &family : family_names())
        for (int size = 1; size <= 10; ++size)
            m.entries.push_back(ManifestEntry{family + "-" + std::to_string(size), family,
                                              data_path(family_domain_path(family)), "", family,
                                              size});
    const BenchResult r = run_bench(m, RunOptions{}, 2);
    const std::string text = format_bench(r);
    for (const auto &family : family_names())
        CHECK(text.find("domain " + family + "\n") != std::string::npos);
    std::size_t tables = 0;
    for (std::size_t pos = 0; (pos = text.find("\ntotal", pos)) != std::string::npos; ++pos)
        ++tables;
    CHECK(tables == 3);
    for (const auto &runs : r.runs)
        for (const auto &run : runs)
            CHECK(run.solved());
}

TEST_CASE("bench output is stable apart from times") {
    Manifest m;
    m.timeout_seconds = 30;
    m.entries.push_back(ManifestEntry{"satellite-3", "satellite",
                                      data_path("satellite/domain.pddl"), "", "satellite", 3});
    auto strip = [](const BenchResult &r) {
        std::string out;
        for (const auto &runs : r.runs)
            for (const auto &run : runs)
                out += run.planner + run.status + std::to_string(run.plan_length) +
                       std::to_string(run.nodes_expanded) + std::to_string(run.actions_after) +
                       std::to_string(run.methods_after) + "\n";
        return out;
    };
    CHECK(strip(run_bench(m, RunOptions{})) == strip(run_bench(m, RunOptions{})));
}

TEST_CASE("manifest with missing files lists all of them") {
    const std::string text =
        R"({"problems": [{"domain": "nope/d.pddl", "problem": "nope/p.pddl"}, {"family": "rover", "size": 2}]})";
    try {
        parse_manifest(text, "/nonexistent", HTN_DATA_DIR);
        FAIL("expected an error");
    } catch (const Error &e) {
        const std::string msg = e.what();
        CHECK(msg.find("/nonexistent/nope/d.pddl") != std::string::npos);
        CHECK(msg.find("/nonexistent/nope/p.pddl") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_manifest(R"({"problems": [{"family": "blocks", "size": 1}]})", ".",
                                   HTN_DATA_DIR),
                    Error);
    CHECK(cli({"bench", "/nonexistent/manifest.json"}).code == 3);
}

TEST_CASE("family generator") {
    CHECK_THROWS_AS(generate_family_problem("rover", 0), Error);
    CHECK_THROWS_AS(generate_family_problem("blocks", 1), Error);
    const Domain d = load_domain(data_path("rover/domain.pddl"));
    for (int size : {1, 10}) {
        const Problem p = parse_problem(generate_family_problem("rover", size), d);
        CHECK(p.domain.hierarchy.count_instances("waypoint") == static_cast<std::size_t>(4 * size));
    }
    CHECK(generate_family_problem("childsnack", 4) == generate_family_problem("childsnack", 4));
}
