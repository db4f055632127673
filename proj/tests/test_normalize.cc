#include "doctest.h"

#include "support/oracle.h"

#include "htn/normalize.h"
#include "htn/parser.h"

#include <random>

using namespace htn;
using namespace htn::testing;

namespace {

Expression atom(const std::string &p, std::vector<std::string> args = {}) {
    Atom a{p, {}};
    for (auto &s : args)
        a.args.push_back(Term::constant(s));
    return Expression::make_atom(a);
}

bool is_nnf(const Expression &e) {
    switch (e.kind) {
    case Expression::Kind::Atom:
    case Expression::Kind::True:
    case Expression::Kind::False:
        return true;
    case Expression::Kind::Not:
        return e.children[0].is_atom();
    case Expression::Kind::And:
    case Expression::Kind::Or:
        for (const auto &c : e.children)
            if (!is_nnf(c))
                return false;
        return true;
    default:
        return false;
    }
}

bool dnf_holds(const std::vector<Clause> &dnf, const std::set<std::string> &atoms) {
    for (const auto &clause : dnf) {
        bool ok = true;
        for (const auto &l : clause)
            ok = ok && (atoms.count(l.atom.to_string()) > 0) == l.positive;
        if (ok)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("forall expands to a conjunction over the instances") {
    TypeHierarchy h;
    h.add_type("waypoint");
    h.add_object("w0", "waypoint");
    h.add_object("w1", "waypoint");
    const Expression e = Expression::forall(
        {"?w", "waypoint"}, Expression::make_atom(Atom{"visited", {Term::variable("?w")}}));
    CHECK(normalize(e, h) ==
          Expression::conjunction({atom("visited", {"w0"}), atom("visited", {"w1"})}));
}

TEST_CASE("exists over a singleton type") {
    TypeHierarchy h;
    h.add_type("waypoint");
    h.add_object("w0", "waypoint");
    const Expression e = Expression::exists(
        {"?w", "waypoint"},
        Expression::make_atom(Atom{"at", {Term::constant("r"), Term::variable("?w")}}));
    const Expression n = normalize(e, h);
    // A one-element disjunction or the atom itself.
    const std::vector<Clause> dnf = to_dnf(n);
    REQUIRE(dnf.size() == 1);
    REQUIRE(dnf[0].size() == 1);
    CHECK(dnf[0][0].atom.to_string() == "(at r w0)");
    CHECK(dnf[0][0].positive);
}

TEST_CASE("implication is not-a or b") {
    const TypeHierarchy h;
    const Expression e = Expression::implication(atom("a"), atom("b"));
    const Expression n = normalize(e, h);
    CHECK(is_nnf(n));
    // Truth table over the four assignments.
    for (int bits = 0; bits < 4; ++bits) {
        std::set<std::string> on;
        if (bits & 1)
            on.insert("(a)");
        if (bits & 2)
            on.insert("(b)");
        const bool expected = !(bits & 1) || (bits & 2);
        CHECK(evaluate(n, on, h) == expected);
    }
}

TEST_CASE("negations are pushed onto atoms") {
    const TypeHierarchy h;
    const Expression e = Expression::negation(Expression::conjunction(
        {atom("a"), Expression::disjunction({atom("b"), Expression::negation(atom("c"))})}));
    const Expression n = normalize(e, h);
    CHECK(is_nnf(n));
    CHECK(n == Expression::disjunction(
                   {Expression::negation(atom("a")),
                    Expression::conjunction({Expression::negation(atom("b")), atom("c")})}));
}

TEST_CASE("to_dnf distributes") {
    const TypeHierarchy h;
    const Expression e =
        Expression::conjunction({Expression::disjunction({atom("a"), atom("b")}), atom("c")});
    const auto dnf = to_dnf(normalize(e, h));
    REQUIRE(dnf.size() == 2);
    CHECK(dnf[0] == Clause{{Atom{"a", {}}, true}, {Atom{"c", {}}, true}});
    CHECK(dnf[1] == Clause{{Atom{"b", {}}, true}, {Atom{"c", {}}, true}});
}

TEST_CASE("to_dnf of a literal and of the constants") {
    CHECK(to_dnf(atom("a")) == std::vector<Clause>{Clause{{Atom{"a", {}}, true}}});
    CHECK(to_dnf(Expression::truth()) == std::vector<Clause>{Clause{}});
    CHECK(to_dnf(Expression::falsity()).empty());
}

TEST_CASE("to_dnf respects the clause cap") {
    std::vector<Expression> parts;
    for (int i = 0; i < 12; ++i)
        parts.push_back(Expression::disjunction(
            {atom("a" + std::to_string(i)), atom("b" + std::to_string(i))}));
    const Expression e = Expression::conjunction(parts);
    CHECK_THROWS_AS(to_dnf(e, 1000), ClauseLimitError);
    CHECK(to_dnf(e, 4096).size() == 4096);
}

TEST_CASE("a variable left free by a quantifier body must be in scope") {
    TypeHierarchy h;
    h.add_type("t");
    h.add_object("o", "t");
    const Expression e = Expression::forall(
        {"?x", "t"}, Expression::make_atom(Atom{"p", {Term::variable("?x"), Term::variable("?y")}}));
    CHECK_THROWS_AS(normalize(e, h, {}), TypingError);
    CHECK_NOTHROW(normalize(e, h, {"?y"}));
}

TEST_CASE("random expressions: normalize and to_dnf keep the truth table") {
    const TypeHierarchy h = expression_hierarchy();
    const auto atoms = expression_atoms();
    std::mt19937 rng(7);
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        const Expression e = random_expression(rng, 4);
        const Expression n = normalize(e, h);
        CHECK(is_nnf(n));
        const auto dnf = to_dnf(n, 1 << 16);
        for (unsigned bits = 0; bits < (1u << atoms.size()); ++bits) {
            std::set<std::string> on;
            for (std::size_t k = 0; k < atoms.size(); ++k)
                if (bits & (1u << k))
                    on.insert(atoms[k].to_string());
            const bool expected = evaluate(e, on, h);
            if (evaluate(n, on, h) != expected || dnf_holds(dnf, on) != expected)
                ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}
