// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "support/micro_domains.h"
#include "support/oracle.h"

#include "htn/bench.h"
#include "htn/cli.h"
#include "htn/families.h"
#include "htn/ground_methods.h"
#include "htn/grounder.h"
#include "htn/normalize.h"
#include "htn/parser.h"
#include "htn/planner.h"
#include "htn/serialize.h"
#include "htn/validate.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace htn;
using namespace htn::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string data(const std::string &relative) {
    return std::string(HTN_DATA_DIR) + "/" + relative;
}

struct Cli {
    int code;
    std::string out;
};

Cli cli(std::vector<std::string> args) {
    args.insert(args.begin(), "htn");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, HTN_DATA_DIR);
    return {code, out.str()};
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            out.push_back(line);
    return out;
}

// Returns "" on success, a reason otherwise.
using Check = std::function<std::string()>;

std::string rover_end_to_end() {
    const auto start = Clock::now();
    const Cli r = cli({"solve", data("rover/domain.pddl"), data("rover/fig1.pddl"), "--planner",
                       "ishop"});
    const double elapsed = seconds_since(start);
    if (r.code != 0)
        return "exit " + std::to_string(r.code);
    std::vector<std::string> core;
    for (const auto &a : lines(r.out))
        if (a.rfind("(visit ", 0) != 0 && a.rfind("(unvisit ", 0) != 0)
            core.push_back(a);
    const std::vector<std::string> expected = {
        "(navigate rover1 waypoint3 waypoint1)", "(sample_rock rover1 rover1store waypoint1)",
        "(communicate_rock_data rover1 general waypoint1 waypoint1 waypoint0)"};
    if (core != expected)
        return "plan was:\n" + r.out;
    if (elapsed >= 1.0)
        return "took " + std::to_string(elapsed) + " s";
    return "";
}

std::string grounding_size() {
    const Cli r = cli({"estimate", data("synthetic/estimate14m.pddl"),
                       data("synthetic/estimate14m_problem.pddl")});
    if (r.code != 0)
        return "exit " + std::to_string(r.code);
    const auto out = lines(r.out);
    if (out.empty() || out.front() != "communicate_soil_data 14000000")
        return "printed: " + r.out;
    return "";
}

std::string inertia_classes() {
    const Cli r = cli({"ground", data("rover/domain.pddl"), data("rover/fig1.pddl")});
    if (r.code != 0)
        return "exit " + std::to_string(r.code);
    if (r.out.find("\n  can_traverse both\n") == std::string::npos)
        return "can_traverse is not in both inertia sets";
    if (r.out.find("\n  at fluent\n") == std::string::npos)
        return "at is not a fluent";
    return "";
}

std::string simplification_soundness() {
    const auto start = Clock::now();
    GroundingOptions plain;
    plain.simplify = false;
    int mismatches = 0;
    std::string first;
    for (std::uint32_t seed = 1; seed <= 50; ++seed) {
        const MicroDomain md = generate_micro_domain(seed);
        const Domain d = parse_domain(md.domain_text);
        const Problem p = parse_problem(md.problem_text, d);
        if (enumerate_plans(ground(p).problem) != enumerate_plans(ground(p, plain).problem)) {
            ++mismatches;
            if (first.empty())
                first = " (first at seed " + std::to_string(seed) + ")";
        }
    }
    const double elapsed = seconds_since(start);
    if (mismatches > 0)
        return std::to_string(mismatches) + " mismatches" + first;
    if (elapsed >= 60.0)
        return "took " + std::to_string(elapsed) + " s";
    return "";
}

std::string normalization_model_check() {
    const TypeHierarchy h = expression_hierarchy();
    const auto atoms = expression_atoms();
    std::mt19937 rng(20240);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const Expression e = random_expression(rng, 4);
        const Expression n = normalize(e, h);
        const auto dnf = to_dnf(n, 1 << 16);
        for (unsigned bits = 0; bits < (1u << atoms.size()); ++bits) {
            std::set<std::string> on;
            for (std::size_t k = 0; k < atoms.size(); ++k)
                if (bits & (1u << k))
                    on.insert(atoms[k].to_string());
            const bool expected = evaluate(e, on, h);
            bool by_dnf = false;
            for (const auto &clause : dnf) {
                bool ok = true;
                for (const auto &l : clause)
                    ok = ok && (on.count(l.atom.to_string()) > 0) == l.positive;
                by_dnf = by_dnf || ok;
            }
            if (evaluate(n, on, h) != expected || by_dnf != expected)
                ++mismatches;
        }
    }
    return mismatches == 0 ? "" : std::to_string(mismatches) + " mismatches";
}

std::string constraint_example() {
    const Domain d = load_domain(data("rover/domain.pddl"));
    const Problem p = load_problem(data("rover/fig1.pddl"), d);
    bool present = false;
    for (const auto &a : p.init)
        present = present || a.to_string() == "(can_traverse rover1 waypoint3 waypoint0)";
    if (!present)
        return "can_traverse(rover1,waypoint3,waypoint0) missing from s0";
    const auto ops = normalize_operators(p.domain.operators, p.domain.hierarchy);
    const InertiaReport inertia = compute_inertia(ops, p.domain.predicates);
    GroundingOptions lazy;
    lazy.prune_early = false;
    const auto cands = instantiate_methods(prepare_methods(p.domain), p.domain.hierarchy, inertia,
                                           make_atom_set(p.init), lazy);
    for (const auto &c : cands) {
        if (c.name != "do_navigate" ||
            c.args != std::vector<std::string>{"rover1", "waypoint3", "waypoint0", "waypoint1"})
            continue;
        const std::string text = to_string(c.constraints.at(1), c.tags);
        if (text != "(before (false) t1)")
            return "constraint is " + text;
        if (!simplify_methods_by_constraints({c}).empty())
            return "method instance kept";
        const GroundingResult g = ground(p);
        for (const auto &m : g.problem.methods)
            if (m.signature() == "(do_navigate rover1 waypoint3 waypoint0 waypoint1)")
                return "method instance present after grounding";
        return "";
    }
    return "method instance not generated";
}

std::string method_fixpoint() {
    const Domain d = load_domain(data("synthetic/chain.pddl"));
    const Problem p = load_problem(data("synthetic/chain_problem.pddl"), d);
    const GroundingResult g = ground(p);
    if (g.report.fixpoint_iterations != 2)
        return "iterations " + std::to_string(g.report.fixpoint_iterations);
    for (const auto &m : g.report.methods)
        if (m.kept != 0)
            return m.name + " survived";
    if (!g.problem.methods.empty())
        return "ground methods left";
    return "";
}

std::string planner_agreement() {
    const Domain d = load_domain(data(family_domain_path("rover")));
    std::string why;
    for (int size = 1; size <= 10; ++size) {
        const Problem p = parse_problem(generate_family_problem("rover", size), d);
        const GroundingResult g = ground(p);
        const SearchResult r = solve_ishop(g.problem);
        const LiftedResult l = solve_shop_lifted(p);
        const std::string tag = "size " + std::to_string(size) + ": ";
        if (r.status != SearchStatus::Solved || l.status != SearchStatus::Solved)
            return tag + "not solved";
        if (r.plan.size() != l.plan.size())
            return tag + "plan lengths differ";
        if (auto v = validate_trace(g.problem, r.plan, r.trace))
            return tag + "iSHOP plan invalid: " + v->to_string();
        if (auto v = validate_plan(g.problem, resolve_plan(g.problem, l.plan)))
            return tag + "SHOP plan invalid: " + v->to_string();
        if (size >= 8 && r.stats.search_ms > l.stats.search_ms)
            why += tag + "iSHOP search " + std::to_string(r.stats.search_ms) + " ms > SHOP " +
                   std::to_string(l.stats.search_ms) + " ms; ";
    }
    return why;
}

std::string agile_scoring() {
    constexpr double tol = 1e-9;
    const auto s = agile_scores({{"fast", 3.0}, {"slow", 30.0}, {"none", std::nullopt}});
    if (std::abs(s.at("fast") - 1.0) > tol)
        return "fastest scored " + std::to_string(s.at("fast"));
    if (std::abs(s.at("slow") - 0.5) > tol)
        return "10x slower scored " + std::to_string(s.at("slow"));
    if (s.at("none") != 0.0)
        return "unsolved scored " + std::to_string(s.at("none"));
    return "";
}

std::string determinism() {
    const fs::path dir = fs::temp_directory_path() / "htn_acceptance";
    fs::create_directories(dir);
    const fs::path a = dir / "ground_a.txt";
    const fs::path b = dir / "ground_b.txt";
    for (const auto &out : {a, b})
        if (cli({"ground", data("rover/domain.pddl"), data("rover/fig1.pddl"), "-o", out.string()})
                .code != 0)
            return "ground failed";
    auto slurp = [](const fs::path &p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream s;
        s << f.rdbuf();
        return s.str();
    };
    const std::string x = slurp(a);
    if (x.empty())
        return "empty output";
    return x == slurp(b) ? "" : "outputs differ";
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, Check>> criteria = {
        {"desk rover end-to-end (iSHOP, < 1 s)", rover_end_to_end},
        {"grounding-size formula prints 14000000", grounding_size},
        {"inertia: can_traverse both, at fluent", inertia_classes},
        {"simplification soundness on 50 micro-domains", simplification_soundness},
        {"normalization model check on 200 expressions", normalization_model_check},
        {"constraint simplification: (before (false) t1)", constraint_example},
        {"method fixpoint: chain deleted in 2 iterations", method_fixpoint},
        {"planner agreement and speed trend on rover 1..10", planner_agreement},
        {"agile scoring: 1, 0.5, 0", agile_scoring},
        {"determinism of ground output", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string why;
        try {
            why = criteria[i].second();
        } catch (const std::exception &e) {
            why = std::string("exception: ") + e.what();
        }
        std::cout << (why.empty() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
        if (!why.empty()) {
            std::cout << ": " << why;
            ++failed;
        }
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
