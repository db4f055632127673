#include "htn/run.h"

#include "htn/error.h"
#include "htn/grounder.h"
#include "htn/parser.h"
#include "htn/serialize.h"

#include <chrono>

namespace htn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void copy_search_stats(const SearchStats &stats, RunRecord &r) {
    r.search_ms = stats.search_ms;
    r.nodes_expanded = stats.nodes_expanded;
    r.backtracks = stats.backtracks;
    r.max_depth = stats.max_depth;
}

void set_status(SearchStatus status, RunRecord &r) {
    r.status = to_string(status);
    r.exit_status = exit_code(status);
}

} // namespace

const char *to_string(PlannerKind kind) {
    return kind == PlannerKind::IShop ? "ishop" : "shop";
}

PlannerKind parse_planner(const std::string &name) {
    if (name == "ishop")
        return PlannerKind::IShop;
    if (name == "shop")
        return PlannerKind::Shop;
    throw Error("unknown planner '" + name + "' (expected ishop or shop)");
}

int exit_code(SearchStatus status) {
    switch (status) {
    case SearchStatus::Solved:
        return ExitSolved;
    case SearchStatus::Timeout:
        return ExitTimeout;
    case SearchStatus::Failure:
    case SearchStatus::DepthExceeded:
        return ExitUnsolvable;
    }
    return ExitInputError;
}

RunOutput run_problem(const std::string &domain_text, const std::string &problem_text,
                      const RunOptions &options, const std::string &name) {
    RunOutput out;
    RunRecord &r = out.record;
    r.problem = name;
    r.planner = to_string(options.planner);
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(std::max(0.0, options.timeout_seconds)));
    auto remaining = [&] {
        return std::chrono::duration<double>(deadline - Clock::now()).count();
    };
    try {
        auto t = Clock::now();
        const Domain domain = parse_domain(domain_text, name.empty() ? "domain" : name);
        const Problem problem = parse_problem(problem_text, domain, name);
        r.parse_ms = ms_since(t);

        SearchLimits limits;
        limits.max_depth = options.max_depth;
        if (options.planner == PlannerKind::IShop) {
            GroundingOptions grounding = options.grounding;
            grounding.deadline = deadline;
            t = Clock::now();
            GroundingResult g;
            try {
                g = ground(problem, grounding);
            } catch (const TimeoutError &) {
                r.ground_ms = ms_since(t);
                set_status(SearchStatus::Timeout, r);
                r.total_ms = ms_since(start);
                return out;
            }
            r.ground_ms = ms_since(t);
            r.actions_before = g.report.actions_before();
            r.actions_after = g.report.actions_after();
            r.methods_before = g.report.methods_before();
            r.methods_after = g.report.methods_after();
            limits.timeout_seconds = options.timeout_seconds > 0 ? remaining() : 0.0;
            SearchResult result = solve_ishop(g.problem, limits);
            copy_search_stats(result.stats, r);
            set_status(result.status, r);
            if (result.status == SearchStatus::Solved) {
                for (auto id : result.plan)
                    r.plan.push_back(g.problem.actions[id].signature());
                out.trace = std::move(result.trace);
                out.problem = std::move(g.problem);
            }
        } else {
            limits.timeout_seconds = options.timeout_seconds > 0 ? remaining() : 0.0;
            LiftedResult result = solve_shop_lifted(problem, limits);
            copy_search_stats(result.stats, r);
            set_status(result.status, r);
            if (result.status == SearchStatus::Solved)
                r.plan = std::move(result.plan);
        }
    } catch (const Error &e) {
        r.status = "input-error";
        r.exit_status = ExitInputError;
        r.error = e.what();
    }
    r.plan_length = r.plan.size();
    r.total_ms = ms_since(start);
    return out;
}

} // namespace htn
