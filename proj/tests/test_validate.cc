#include "doctest.h"

#include "support/fixtures.h"

#include "htn/planner.h"
#include "htn/serialize.h"
#include "htn/validate.h"

using namespace htn;
using namespace htn::testing;

namespace {

const std::vector<std::string> kFig1Plan = {"(navigate rover1 waypoint3 waypoint1)",
                                            "(sample_rock rover1 rover1store waypoint1)",
                                            "(communicate_rock_data rover1 general waypoint1 "
                                            "waypoint1 waypoint0)"};

// The desk rover problem without the direct edge waypoint3 -> waypoint0, asked to drive
// there: the rover has to go through waypoint1.
const Problem &detour_problem() {
    static const Problem p = [] {
        Problem q = fig1_problem();
        std::erase_if(q.init, [](const Atom &a) {
            return a.to_string() == "(can_traverse rover1 waypoint3 waypoint0)";
        });
        q.goal.tasks = {{"t1", TaskRef{"do_navigate",
                                       {Term::constant("rover1"), Term::constant("waypoint3"),
                                        Term::constant("waypoint0")},
                                       false}}};
        return q;
    }();
    return p;
}

} // namespace

TEST_CASE("the desk rover plan is valid") {
    const GroundProblem &gp = fig1_ground().problem;
    CHECK_FALSE(validate_plan(gp, resolve_plan(gp, kFig1Plan)).has_value());
}

TEST_CASE("the empty plan of an empty goal is valid") {
    Problem p = fig1_problem();
    p.goal = TaskNetwork{};
    const GroundingResult g = ground(p);
    CHECK_FALSE(validate_plan(g.problem, {}).has_value());
    DecompositionTrace t;
    t.nodes.push_back(TraceNode{});
    CHECK_FALSE(validate_trace(g.problem, {}, t).has_value());
}

TEST_CASE("dropping navigate breaks the sampling step") {
    const GroundProblem &gp = fig1_ground().problem;
    const std::vector<std::string> cut(kFig1Plan.begin() + 1, kFig1Plan.end());
    const auto v = validate_plan(gp, resolve_plan(gp, cut));
    REQUIRE(v.has_value());
    CHECK(v->step == 0);
    CHECK(v->reason.find("(at rover1 waypoint1) does not hold") != std::string::npos);
}

TEST_CASE("unknown actions are rejected") {
    const GroundProblem &gp = fig1_ground().problem;
    CHECK_THROWS(resolve_plan(gp, {"(navigate rover1 waypoint3 waypoint2)"}));
}

TEST_CASE("detour trace with its between constraint") {
    const GroundingResult g = ground(detour_problem());
    const SearchResult r = solve_ishop(g.problem);
    REQUIRE(r.status == SearchStatus::Solved);
    std::vector<std::string> plan;
    for (auto a : r.plan)
        plan.push_back(g.problem.actions[a].signature());
    CHECK(plan == std::vector<std::string>{"(navigate rover1 waypoint3 waypoint1)",
                                           "(visit waypoint1)",
                                           "(navigate rover1 waypoint1 waypoint0)",
                                           "(unvisit waypoint1)"});
    const GroundMethod &top = g.problem.methods[r.trace.nodes[1].method];
    bool has_between = false;
    for (const auto &c : top.residual_constraints)
        if (c.kind == Constraint::Kind::Between)
            has_between = to_string(g.problem, c, top.tags) == "(between (visited waypoint1) t2 t4)";
    CHECK(has_between);
    CHECK_FALSE(validate_trace(g.problem, r.plan, r.trace).has_value());

    // The trace survives a round trip through its text form.
    const std::string text = write_trace(g.problem, r.trace);
    const DecompositionTrace back = read_trace(g.problem, text);
    CHECK(write_trace(g.problem, back) == text);
    CHECK_FALSE(validate_trace(g.problem, r.plan, back).has_value());
}

TEST_CASE("swapping t2 and t3 violates the series") {
    const GroundingResult g = ground(detour_problem());
    const SearchResult r = solve_ishop(g.problem);
    REQUIRE(r.status == SearchStatus::Solved);
    Plan plan = r.plan;
    DecompositionTrace trace = r.trace;
    // Run the inner navigate before visit, keeping the trace consistent
    // with the plan.
    std::swap(plan[1], plan[2]);
    TraceNode &top = trace.nodes[1];
    top.spans[1] = Span{2, 3};
    top.spans[2] = Span{1, 2};
    for (auto &n : trace.nodes)
        if (n.parent == 1 && n.parent_slot == 2)
            n.spans[0] = Span{1, 2};
    const auto v = validate_trace(g.problem, plan, trace);
    REQUIRE(v.has_value());
    CHECK(v->reason.find("(series t1 t2 t3 t4) violated") != std::string::npos);
}

TEST_CASE("a broken between constraint is found") {
    const GroundingResult g = ground(detour_problem());
    const SearchResult r = solve_ishop(g.problem);
    REQUIRE(r.status == SearchStatus::Solved);
    // Replace visit by unvisit: the plan still runs, visited never holds.
    const auto unvisit = g.problem.find_actions("(unvisit waypoint1)");
    REQUIRE(unvisit.size() == 1);
    Plan plan = r.plan;
    plan[1] = unvisit[0];
    CHECK(validate_trace(g.problem, plan, r.trace).has_value());
}

TEST_CASE("trace leaves must be the plan") {
    const GroundProblem &gp = fig1_ground().problem;
    const SearchResult r = solve_ishop(gp);
    REQUIRE(r.status == SearchStatus::Solved);
    Plan longer = r.plan;
    longer.push_back(r.plan.back());
    CHECK(validate_trace(gp, longer, r.trace).has_value());
    DecompositionTrace bad = r.trace;
    bad.nodes[1].method = static_cast<int>(gp.methods.size());
    CHECK(validate_trace(gp, r.plan, bad).has_value());
}

TEST_CASE("a method node without residual constraints is fine") {
    const GroundProblem &gp = fig1_ground().problem;
    const SearchResult r = solve_ishop(gp);
    REQUIRE(r.status == SearchStatus::Solved);
    bool found = false;
    for (const auto &n : r.trace.nodes)
        if (n.method >= 0 && gp.methods[n.method].residual_constraints.empty())
            found = true;
    CHECK(found);
    CHECK_FALSE(validate_trace(gp, r.plan, r.trace).has_value());
}
