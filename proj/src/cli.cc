#include "htn/cli.h"

#include "htn/bench.h"
#include "htn/error.h"
#include "htn/grounder.h"
#include "htn/parser.h"
#include "htn/run.h"
#include "htn/serialize.h"
#include "htn/validate.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

namespace htn {

namespace {

using json = nlohmann::json;

json to_json(const RunRecord &r) {
    json j = {{"problem", r.problem},
              {"planner", r.planner},
              {"status", r.status},
              {"exit_status", r.exit_status},
              {"parse_ms", r.parse_ms},
              {"ground_ms", r.ground_ms},
              {"search_ms", r.search_ms},
              {"total_ms", r.total_ms},
              {"actions_before", r.actions_before},
              {"actions_after", r.actions_after},
              {"methods_before", r.methods_before},
              {"methods_after", r.methods_after},
              {"nodes_expanded", r.nodes_expanded},
              {"backtracks", r.backtracks},
              {"max_depth", r.max_depth},
              {"plan_length", r.plan_length}};
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + path + "'");
    f << text;
}

struct Flags {
    std::string domain;
    std::string problem;
    std::string plan;
    std::string trace;
    std::string output;
    std::string stats;
    std::string manifest;
    std::string data_dir;
    std::string planner = "ishop";
    double timeout = 600.0;
    std::uint64_t depth = 1000000;
    bool no_method_fixpoint = false;
    bool no_simplify = false;
    bool estimate_only = false;
    int jobs = 1;
};

int print_estimate(const Problem &problem, std::ostream &out) {
    std::uint64_t total = 0;
    for (const auto &[name, n] : estimate_schemas(problem.domain)) {
        out << name << " " << n << "\n";
        total = total > UINT64_MAX - n ? UINT64_MAX : total + n;
    }
    out << "total " << total << "\n";
    return ExitSolved;
}

GroundingOptions grounding_options(const Flags &f) {
    GroundingOptions g;
    g.simplify = !f.no_simplify;
    g.method_fixpoint = !f.no_method_fixpoint;
    return g;
}

int cmd_estimate(const Flags &f, std::ostream &out) {
    const Domain domain = load_domain(f.domain);
    return print_estimate(load_problem(f.problem, domain), out);
}

int cmd_ground(const Flags &f, std::ostream &out) {
    const Domain domain = load_domain(f.domain);
    const Problem problem = load_problem(f.problem, domain);
    if (f.estimate_only)
        return print_estimate(problem, out);
    const GroundingResult g = ground(problem, grounding_options(f));
    out << g.report.to_string();
    const std::string text = write_ground_problem(g.problem);
    if (f.output.empty())
        out << "\n" << text;
    else
        write_text(f.output, text);
    return ExitSolved;
}

int cmd_solve(const Flags &f, std::ostream &out, std::ostream &err) {
    RunOptions options;
    options.planner = parse_planner(f.planner);
    options.timeout_seconds = f.timeout;
    options.max_depth = f.depth;
    options.grounding = grounding_options(f);
    const auto start = std::chrono::steady_clock::now();
    std::string domain_text;
    std::string problem_text;
    domain_text = read_file(f.domain);
    problem_text = read_file(f.problem);
    RunOutput run = run_problem(domain_text, problem_text, options, f.problem);
    RunRecord &r = run.record;
    // Count file reading as parsing.
    r.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
    if (!r.error.empty())
        err << "error: " << r.error << "\n";
    else
        err << r.status << "\n";
    std::string plan_text;
    for (const auto &a : r.plan)
        plan_text += a + "\n";
    if (r.solved()) {
        if (f.output.empty())
            out << plan_text;
        else
            write_text(f.output, plan_text);
        if (!f.trace.empty() && run.trace)
            write_text(f.trace, write_trace(*run.problem, *run.trace));
    }
    if (!f.stats.empty())
        write_text(f.stats, to_json(r).dump(2) + "\n");
    return r.exit_status;
}

int cmd_validate(const Flags &f, std::ostream &out) {
    const Domain domain = load_domain(f.domain);
    const Problem problem = load_problem(f.problem, domain);
    GroundingOptions options = grounding_options(f);
    const GroundingResult g = ground(problem, options);
    const Plan plan = resolve_plan(g.problem, read_plan(read_file(f.plan), f.plan));
    std::optional<Violation> v;
    if (f.trace.empty()) {
        v = validate_plan(g.problem, plan);
    } else {
        v = validate_trace(g.problem, plan, read_trace(g.problem, read_file(f.trace), f.trace));
    }
    if (v) {
        out << "invalid: " << v->to_string() << "\n";
        return ExitUnsolvable;
    }
    out << "valid\n";
    return ExitSolved;
}

int cmd_bench(const Flags &f, const CLI::App &sub, std::ostream &out) {
    Manifest m = load_manifest(f.manifest, f.data_dir);
    if (sub.count("--timeout") > 0)
        m.timeout_seconds = f.timeout;
    RunOptions base;
    base.max_depth = f.depth;
    base.grounding = grounding_options(f);
    const BenchResult result = run_bench(m, base, f.jobs);
    out << format_bench(result);
    if (!f.stats.empty()) {
        json records = json::array();
        for (std::size_t i = 0; i < result.runs.size(); ++i) {
            for (std::size_t p = 0; p < result.planners.size(); ++p) {
                json j = to_json(result.runs[i][p]);
                j["group"] = result.entries[i].group;
                j["score"] = result.scores[i][p];
                records.push_back(std::move(j));
            }
        }
        write_text(f.stats, records.dump(2) + "\n");
    }
    return ExitSolved;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err,
            const std::string &data_dir) {
    Flags f;
    f.data_dir = data_dir;
    CLI::App app{"Grounding HTN planner"};
    app.require_subcommand(1);

    auto add_search_flags = [&](CLI::App *c) {
        c->add_option("--timeout", f.timeout, "Time limit in seconds (whole run)");
        c->add_option("--depth", f.depth, "Maximum decomposition depth");
    };
    auto add_grounding_flags = [&](CLI::App *c) {
        c->add_flag("--no-method-fixpoint", f.no_method_fixpoint,
                    "Only check primitive subtasks when simplifying methods");
        c->add_flag("--no-simplify", f.no_simplify, "Ground without inertia simplification");
    };

    auto *ground_cmd = app.add_subcommand("ground", "Ground a problem and print the report");
    ground_cmd->add_option("domain", f.domain)->required();
    ground_cmd->add_option("problem", f.problem)->required();
    ground_cmd->add_option("-o,--output", f.output, "Write the ground problem here");
    ground_cmd->add_flag("--estimate-only", f.estimate_only,
                         "Print the instance count of each schema without grounding");
    add_grounding_flags(ground_cmd);

    auto *estimate_cmd = app.add_subcommand("estimate", "Instance count of each schema");
    estimate_cmd->add_option("domain", f.domain)->required();
    estimate_cmd->add_option("problem", f.problem)->required();

    auto *solve_cmd = app.add_subcommand("solve", "Solve a problem and print the plan");
    solve_cmd->add_option("domain", f.domain)->required();
    solve_cmd->add_option("problem", f.problem)->required();
    solve_cmd->add_option("--planner", f.planner, "ishop or shop")
        ->check(CLI::IsMember({"ishop", "shop"}));
    solve_cmd->add_option("-o,--output", f.output, "Write the plan here");
    solve_cmd->add_option("--trace", f.trace, "Write the decomposition trace here (ishop)");
    solve_cmd->add_option("--stats", f.stats, "Write the stats record (JSON) here");
    add_search_flags(solve_cmd);
    add_grounding_flags(solve_cmd);

    auto *validate_cmd = app.add_subcommand("validate", "Check a plan (and trace)");
    validate_cmd->add_option("domain", f.domain)->required();
    validate_cmd->add_option("problem", f.problem)->required();
    validate_cmd->add_option("plan", f.plan)->required();
    validate_cmd->add_option("--trace", f.trace, "Decomposition trace to check as well");

    auto *bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest");
    bench_cmd->add_option("manifest", f.manifest)->required();
    bench_cmd->add_option("--jobs", f.jobs, "Problems run at the same time")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--stats", f.stats, "Write all stats records (JSON) here");
    bench_cmd->add_option("--data-dir", f.data_dir, "Directory of the family domains");
    add_search_flags(bench_cmd);
    add_grounding_flags(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : ExitInputError;
    }

    try {
        if (*ground_cmd)
            return cmd_ground(f, out);
        if (*estimate_cmd)
            return cmd_estimate(f, out);
        if (*solve_cmd)
            return cmd_solve(f, out, err);
        if (*validate_cmd)
            return cmd_validate(f, out);
        if (*bench_cmd)
            return cmd_bench(f, *bench_cmd, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return ExitInputError;
    }
    return ExitInputError;
}

} // namespace htn
