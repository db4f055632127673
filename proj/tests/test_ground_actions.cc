#include "doctest.h"

#include "support/fixtures.h"

#include "htn/ground_actions.h"
#include "htn/normalize.h"
#include "htn/parser.h"

#include <algorithm>
#include <deque>
#include <set>

using namespace htn;
using namespace htn::testing;

namespace {

Atom ground_atom(const std::string &p, const std::vector<std::string> &args) {
    Atom a{p, {}};
    for (const auto &s : args)
        a.args.push_back(Term::constant(s));
    return a;
}

Expression lit(const std::string &p, bool positive = true) {
    Expression e = Expression::make_atom(Atom{p, {}});
    return positive ? e : Expression::negation(e);
}

InertiaReport rover_inertia() {
    return compute_inertia(normalize_operators(rover_domain().operators, fig1_problem().domain.hierarchy),
                           rover_domain().predicates);
}

AtomSet fig1_s0() {
    return make_atom_set(fig1_problem().init);
}

std::vector<ActionCandidate> instantiate_rover(const GroundingOptions &options) {
    const auto &h = fig1_problem().domain.hierarchy;
    return instantiate_operators(normalize_operators(rover_domain().operators, h), h,
                                 rover_inertia(), fig1_s0(), options);
}

} // namespace

TEST_CASE("grounding size is the product of the domain sizes") {
    const Domain d = load_domain(data_path("synthetic/estimate14m.pddl"));
    const Problem p = load_problem(data_path("synthetic/estimate14m_problem.pddl"), d);
    const OperatorSchema &op = p.domain.operators.at(0);
    CHECK(estimate_grounding_size(op.params, p.domain.hierarchy) == 14000000u);
    CHECK(estimate_grounding_size({}, p.domain.hierarchy) == 1u);

    TypeHierarchy h;
    h.add_type("rover");
    h.add_type("waypoint");
    for (auto r : {"r1", "r2"})
        h.add_object(r, "rover");
    for (auto w : {"w1", "w2", "w3"})
        h.add_object(w, "waypoint");
    CHECK(estimate_grounding_size({{"?x", "rover"}, {"?a", "waypoint"}, {"?b", "waypoint"}}, h) ==
          18u);
}

TEST_CASE("grounding size saturates") {
    TypeHierarchy h;
    h.add_type("t");
    for (int i = 0; i < 1000; ++i)
        h.add_object("o" + std::to_string(i), "t");
    std::vector<TypedVariable> params;
    for (int i = 0; i < 10; ++i)
        params.push_back({"?v" + std::to_string(i), "t"});
    CHECK(estimate_grounding_size(params, h) == UINT64_MAX);
}

TEST_CASE("inertia of the rover domain") {
    const InertiaReport r = rover_inertia();
    CHECK(r.of("can_traverse").classify() == InertiaClass::Both);
    CHECK(r.of("visible").classify() == InertiaClass::Both);
    CHECK(r.of("at").classify() == InertiaClass::Fluent);
    CHECK(r.of("at_rock_sample").classify() == InertiaClass::PositiveInertia);
    CHECK(r.of("communicated_rock_data").classify() == InertiaClass::NegativeInertia);
}

TEST_CASE("no operators: every predicate is inertia both ways") {
    const InertiaReport r = compute_inertia({}, rover_domain().predicates);
    for (const auto &p : rover_domain().predicates)
        CHECK(r.of(p.name).classify() == InertiaClass::Both);
}

TEST_CASE("simplify_atom") {
    const InertiaReport r = rover_inertia();
    const AtomSet s0 = fig1_s0();
    CHECK(simplify_atom(ground_atom("can_traverse", {"rover1", "waypoint3", "waypoint1"}), r, s0) ==
          AtomValue::True);
    CHECK(simplify_atom(ground_atom("can_traverse", {"rover1", "waypoint3", "waypoint2"}), r, s0) ==
          AtomValue::False);
    CHECK(simplify_atom(ground_atom("at", {"rover1", "waypoint3"}), r, s0) == AtomValue::Keep);
    CHECK(simplify_atom(ground_atom("at", {"rover1", "waypoint2"}), r, s0) == AtomValue::Keep);
    // Never produced and absent: false. Never consumed and present: true.
    CHECK(simplify_atom(ground_atom("at_rock_sample", {"waypoint0"}), r, s0) == AtomValue::False);
    CHECK(simplify_atom(ground_atom("at_rock_sample", {"waypoint1"}), r, s0) == AtomValue::Keep);
}

TEST_CASE("simplify_expression identities") {
    const Expression a = lit("a");
    const Expression na = lit("a", false);
    const Expression T = Expression::truth();
    const Expression F = Expression::falsity();
    CHECK(simplify_expression(Expression::conjunction({F, a})).is_false());
    CHECK(simplify_expression(Expression::conjunction({T, a})) == a);
    CHECK(simplify_expression(Expression::conjunction({a, a})) == a);
    CHECK(simplify_expression(Expression::conjunction({a, na})).is_false());
    CHECK(simplify_expression(Expression::disjunction({T, a})).is_true());
    CHECK(simplify_expression(Expression::disjunction({F, a})) == a);
    CHECK(simplify_expression(Expression::disjunction({a, a})) == a);
    CHECK(simplify_expression(Expression::disjunction({a, na})).is_true());
    CHECK(simplify_expression(Expression::negation(T)).is_false());
    CHECK(simplify_expression(Expression::negation(F)).is_true());
    // not True inside a conjunction, as in the worked before-constraint.
    CHECK(simplify_expression(Expression::conjunction({Expression::negation(T), lit("b"), a}))
              .is_false());
    // Nested: (a or (b and not b)) and c = a and c.
    CHECK(simplify_expression(Expression::conjunction(
              {Expression::disjunction({a, Expression::conjunction({lit("b"), lit("b", false)})}),
               lit("c")})) == Expression::conjunction({a, lit("c")}));
}

TEST_CASE("navigate rover1 waypoint3 waypoint1 keeps only its fluent preconditions") {
    const auto &h = fig1_problem().domain.hierarchy;
    PropositionTable table;
    GroundingOptions options;
    std::vector<OperatorStats> stats;
    const auto actions = ground_operators(normalize_operators(rover_domain().operators, h), h,
                                          rover_inertia(), fig1_s0(), options, table, &stats);
    auto it = std::find_if(actions.begin(), actions.end(), [](const GroundAction &a) {
        return a.signature() == "(navigate rover1 waypoint3 waypoint2)";
    });
    // can_traverse(rover1, waypoint3, waypoint2) is not in s0.
    CHECK(it == actions.end());

    it = std::find_if(actions.begin(), actions.end(), [](const GroundAction &a) {
        return a.signature() == "(navigate rover1 waypoint3 waypoint1)";
    });
    REQUIRE(it != actions.end());
    std::set<std::string> pre;
    for (auto id : it->pre_pos)
        pre.insert(table.atom(id).to_string());
    // The desk domain never changes `available`, so it is decided by inertia
    // like can_traverse and visible.
    CHECK(rover_inertia().of("available").classify() == InertiaClass::Both);
    CHECK(pre == std::set<std::string>{"(at rover1 waypoint3)"});
    CHECK(it->pre_neg.empty());
}

TEST_CASE("surviving navigate actions are exactly the traverse edges") {
    // Oracle: for each of the 16 substitutions, keep it iff can_traverse is
    // in s0 (inertia) and source differs from destination (contradictory
    // effects); visible holds on every edge of the desk rover map.
    const AtomSet s0 = fig1_s0();
    std::set<std::string> expected;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const std::string from = "waypoint" + std::to_string(a);
            const std::string to = "waypoint" + std::to_string(b);
            if (a != b && s0.count("(can_traverse rover1 " + from + " " + to + ")") &&
                s0.count("(visible " + from + " " + to + ")"))
                expected.insert("(navigate rover1 " + from + " " + to + ")");
        }
    }
    CHECK(expected.size() == 8);

    std::set<std::string> got;
    for (const auto &c : simplify_actions(instantiate_rover({})))
        if (c.name == "navigate") {
            std::string sig = "(navigate";
            for (const auto &a : c.args)
                sig += " " + a;
            got.insert(sig + ")");
        }
    CHECK(got == expected);
}

TEST_CASE("navigate from a waypoint to itself has a contradictory effect") {
    GroundingOptions lazy;
    lazy.prune_early = false;
    const auto candidates = instantiate_rover(lazy);
    auto it = std::find_if(candidates.begin(), candidates.end(), [](const ActionCandidate &c) {
        return c.name == "navigate" &&
               c.args == std::vector<std::string>{"rover1", "waypoint1", "waypoint1"};
    });
    REQUIRE(it != candidates.end());
    CHECK(it->effect.is_false());
}

TEST_CASE("deletion rules") {
    ActionCandidate pre_false;
    pre_false.name = "x";
    pre_false.precondition = Expression::falsity();
    pre_false.effect = lit("a");
    pre_false.had_effects = true;

    ActionCandidate noop;
    noop.name = "x";
    noop.precondition = lit("b");
    noop.effect = Expression::truth();
    noop.had_effects = true;

    ActionCandidate empty_effects = noop;
    empty_effects.had_effects = false;

    ActionCandidate useful;
    useful.name = "x";
    useful.precondition = lit("b");
    useful.effect = lit("a");
    useful.had_effects = true;

    std::vector<OperatorStats> stats(1);
    stats[0].name = "x";
    const auto kept = simplify_actions({pre_false, noop, empty_effects, useful}, &stats);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].effect.is_true());
    CHECK(kept[1].effect == lit("a"));
    CHECK(stats[0].deleted_precondition == 1);
    CHECK(stats[0].deleted_noop == 1);
}

TEST_CASE("early pruning and late simplification agree") {
    GroundingOptions lazy;
    lazy.prune_early = false;
    const auto eager = simplify_actions(instantiate_rover({}));
    const auto late = simplify_actions(instantiate_rover(lazy));
    REQUIRE(eager.size() == late.size());
    for (std::size_t i = 0; i < eager.size(); ++i) {
        CHECK(eager[i].name == late[i].name);
        CHECK(eager[i].args == late[i].args);
        CHECK(eager[i].precondition == late[i].precondition);
    }
}

TEST_CASE("candidate count equals the estimate") {
    const auto &h = fig1_problem().domain.hierarchy;
    const auto ops = normalize_operators(rover_domain().operators, h);
    std::vector<OperatorStats> stats;
    instantiate_operators(ops, h, rover_inertia(), fig1_s0(), {}, &stats);
    REQUIRE(stats.size() == ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i)
        CHECK(stats[i].candidates == estimate_grounding_size(ops[i].params, h));
}

TEST_CASE("disjunctive preconditions split into one action per clause") {
    const Domain d = parse_domain(R"((define (domain dis)
      (:types t)
      (:predicates (p ?x - t) (q ?x - t) (r ?x - t))
      (:action a :parameters (?x - t)
        :precondition (or (p ?x) (q ?x))
        :effect (and (r ?x) (not (p ?x)) (not (q ?x))))
      (:action b :parameters (?x - t) :precondition (r ?x) :effect (and (p ?x) (q ?x)))))");
    const Problem p = parse_problem(
        "(define (problem d) (:domain dis) (:objects o - t) (:init (p o)) (:goal-tasks ()))", d);
    const auto ops = normalize_operators(d.operators, p.domain.hierarchy);
    PropositionTable table;
    const auto actions = ground_operators(ops, p.domain.hierarchy,
                                          compute_inertia(ops, d.predicates),
                                          make_atom_set(p.init), {}, table);
    REQUIRE(actions.size() == 3);
    CHECK(actions[0].signature() == "(a o)");
    CHECK(actions[0].clause == 0);
    CHECK(actions[1].signature() == "(a o)");
    CHECK(actions[1].clause == 1);
}

TEST_CASE("simplification keeps the reachable states") {
    // Oracle: breadth-first reachability over the simplified and over the
    // unsimplified action set, compared as sets of atom strings.
    auto reachable = [](const GroundProblem &gp) {
        std::set<std::set<std::string>> seen;
        std::deque<State> queue{gp.state0};
        auto key = [&](const std::vector<PropId> &ids) {
            std::set<std::string> out;
            for (auto id : ids)
                out.insert(gp.table.atom(id).to_string());
            // Atoms that inertia decides are absent from the simplified
            // table; drop them on both sides.
            std::erase_if(out, [](const std::string &a) {
                return a.rfind("(can_traverse", 0) == 0 || a.rfind("(visible", 0) == 0 ||
                       a.rfind("(at_lander", 0) == 0 || a.rfind("(store_of", 0) == 0 ||
                       a.rfind("(equipped", 0) == 0 || a.rfind("(available", 0) == 0 ||
                       a.rfind("(channel_free", 0) == 0;
            });
            return out;
        };
        // Search over id vectors; translate to atom strings once at the end.
        std::set<std::vector<PropId>> visited{gp.state0.ids()};
        while (!queue.empty()) {
            State s = std::move(queue.front());
            queue.pop_front();
            for (const auto &a : gp.actions) {
                if (!applicable(a, s))
                    continue;
                State next = apply(a, s);
                if (visited.insert(next.ids()).second)
                    queue.push_back(std::move(next));
            }
        }
        for (const auto &ids : visited)
            seen.insert(key(ids));
        return seen;
    };
    GroundingOptions plain;
    plain.simplify = false;
    const auto simplified = reachable(ground(fig1_problem()).problem);
    const auto unsimplified = reachable(ground(fig1_problem(), plain).problem);
    CHECK(simplified.size() > 1);
    CHECK(simplified == unsimplified);
}
