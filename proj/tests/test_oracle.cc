#include "doctest.h"

#include "support/micro_domains.h"
#include "support/oracle.h"

#include "htn/grounder.h"
#include "htn/parser.h"
#include "htn/planner.h"
#include "htn/serialize.h"
#include "htn/validate.h"

using namespace htn;
using namespace htn::testing;

TEST_CASE("micro-domains: simplification keeps the plan set") {
    GroundingOptions plain;
    plain.simplify = false;
    int nonempty = 0;
    for (std::uint32_t seed = 1000; seed < 1030; ++seed) {
        CAPTURE(seed);
        const MicroDomain md = generate_micro_domain(seed);
        const Domain d = parse_domain(md.domain_text);
        const Problem p = parse_problem(md.problem_text, d);
        const PlanSet simplified = enumerate_plans(ground(p).problem);
        const PlanSet unsimplified = enumerate_plans(ground(p, plain).problem);
        CHECK(simplified == unsimplified);
        nonempty += !simplified.empty();
    }
    // The generator must produce solvable problems too.
    CHECK(nonempty >= 5);
}

TEST_CASE("micro-domains: planners return plans of the oracle") {
    SearchLimits limits;
    limits.timeout_seconds = 0.5;
    for (std::uint32_t seed = 2000; seed < 2030; ++seed) {
        CAPTURE(seed);
        const MicroDomain md = generate_micro_domain(seed);
        const Domain d = parse_domain(md.domain_text);
        const Problem p = parse_problem(md.problem_text, d);
        const GroundingResult g = ground(p);
        const SearchResult r = solve_ishop(g.problem, limits);
        const LiftedResult l = solve_shop_lifted(p, limits);
        // Grounding removes recursion the lifted search still explores, so
        // only one direction of agreement holds for unsolved problems.
        if (l.status == SearchStatus::Solved)
            CHECK(r.status == SearchStatus::Solved);
        if (r.status == SearchStatus::Failure)
            CHECK(l.status != SearchStatus::Solved);
        if (r.status != SearchStatus::Solved)
            continue;
        CHECK_FALSE(validate_trace(g.problem, r.plan, r.trace).has_value());
        std::vector<std::string> plan;
        for (auto a : r.plan)
            plan.push_back(g.problem.actions[a].signature());
        if (l.status == SearchStatus::Solved)
            CHECK(plan == l.plan);
        // Plans within the oracle's bounds must be among its plans.
        OracleLimits big;
        big.max_depth = 6;
        big.max_length = plan.size();
        if (plan.size() <= 8)
            CHECK(enumerate_plans(g.problem, big).count(plan) == 1);
    }
}

TEST_CASE("noop deletion can lose HTN plans") {
    // `mark` adds an atom that is already true and never deleted, so its
    // effects simplify to True and the action is deleted. The method that
    // calls it goes with it, although executing it is harmless.
    const Domain d = parse_domain(R"((define (domain noop)
      (:predicates (ready) (done))
      (:action mark :parameters () :precondition (and) :effect (ready))
      (:action finish :parameters () :precondition (ready) :effect (done))
      (:method go :parameters () :expansion ((tag t1 (mark)) (tag t2 (finish))))))");
    const Problem p = parse_problem(
        "(define (problem n) (:domain noop) (:init (ready)) (:goal-tasks ((tag t1 (go)))))", d);
    GroundingOptions plain;
    plain.simplify = false;
    const PlanSet unsimplified = enumerate_plans(ground(p, plain).problem);
    const PlanSet simplified = enumerate_plans(ground(p).problem);
    CHECK(unsimplified == PlanSet{{"(mark)", "(finish)"}});
    CHECK(simplified.empty());
}
