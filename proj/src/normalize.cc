#include "htn/normalize.h"

#include "htn/type_hierarchy.h"

#include <algorithm>

namespace htn {

namespace {

using Kind = Expression::Kind;

// Builds an n-ary node, flattening children of the same kind.
Expression make_nary(Kind kind, std::vector<Expression> parts) {
    std::vector<Expression> flat;
    for (auto &p : parts) {
        if (p.kind == kind) {
            for (auto &c : p.children)
                flat.push_back(std::move(c));
        } else {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty())
        return kind == Kind::And ? Expression::truth() : Expression::falsity();
    if (flat.size() == 1)
        return std::move(flat.front());
    return kind == Kind::And ? Expression::conjunction(std::move(flat))
                             : Expression::disjunction(std::move(flat));
}

class Normalizer {
public:
    Normalizer(const TypeHierarchy &h, const std::vector<std::string> *scope)
        : h_(h), scope_(scope) {}

    Expression run(const Expression &e, bool negated) {
        switch (e.kind) {
        case Kind::Atom:
            return negated ? Expression::negation(e) : e;
        case Kind::True:
            return negated ? Expression::falsity() : Expression::truth();
        case Kind::False:
            return negated ? Expression::truth() : Expression::falsity();
        case Kind::Not:
            return run(e.children.front(), !negated);
        case Kind::And:
        case Kind::Or: {
            std::vector<Expression> parts;
            for (const auto &c : e.children)
                parts.push_back(run(c, negated));
            bool conj = (e.kind == Kind::And) != negated;
            return make_nary(conj ? Kind::And : Kind::Or, std::move(parts));
        }
        case Kind::Imply: {
            // a -> b  ==  (not a) or b;  not(a -> b)  ==  a and (not b)
            const Expression &a = e.children[0];
            const Expression &b = e.children[1];
            if (negated)
                return make_nary(Kind::And, {run(a, false), run(b, true)});
            return make_nary(Kind::Or, {run(a, true), run(b, false)});
        }
        case Kind::Forall:
        case Kind::Exists: {
            std::vector<Expression> parts;
            for (const auto &c : h_.instances_of(e.bound.type)) {
                Substitution sigma;
                sigma.bind_unchecked(e.bound.name, c);
                Expression body = substitute(e.children.front(), sigma);
                check_scope(body);
                parts.push_back(run(body, negated));
            }
            bool conj = (e.kind == Kind::Forall) != negated;
            return make_nary(conj ? Kind::And : Kind::Or, std::move(parts));
        }
        }
        return e;
    }

private:
    void check_scope(const Expression &body) const {
        if (!scope_)
            return;
        for (const auto &v : free_variables(body))
            if (std::find(scope_->begin(), scope_->end(), v) == scope_->end())
                throw TypingError("unbound variable " + v + " inside quantifier body");
    }

    const TypeHierarchy &h_;
    const std::vector<std::string> *scope_;
};

void add_literal(Clause &clause, const Literal &lit, bool &contradictory) {
    for (const auto &l : clause) {
        if (l.atom == lit.atom) {
            if (l.positive != lit.positive)
                contradictory = true;
            return;
        }
    }
    clause.push_back(lit);
}

class DnfBuilder {
public:
    DnfBuilder(std::size_t cap, const std::string &context) : cap_(cap), context_(context) {}

    std::vector<Clause> run(const Expression &e) {
        switch (e.kind) {
        case Kind::Atom:
            return {Clause{Literal{e.atom, true}}};
        case Kind::Not:
            if (!e.children.front().is_atom())
                throw GroundingError("to_dnf: expression is not normalized: " + e.to_string());
            return {Clause{Literal{e.children.front().atom, false}}};
        case Kind::True:
            return {Clause{}};
        case Kind::False:
            return {};
        case Kind::Or: {
            std::vector<Clause> out;
            for (const auto &c : e.children) {
                for (auto &clause : run(c))
                    push_unique(out, std::move(clause));
            }
            return out;
        }
        case Kind::And: {
            std::vector<Clause> acc{Clause{}};
            for (const auto &c : e.children) {
                auto part = run(c);
                std::vector<Clause> next;
                for (const auto &left : acc) {
                    for (const auto &right : part) {
                        Clause merged = left;
                        bool contradictory = false;
                        for (const auto &lit : right)
                            add_literal(merged, lit, contradictory);
                        if (!contradictory)
                            push_unique(next, std::move(merged));
                    }
                }
                acc = std::move(next);
                if (acc.empty())
                    break;
            }
            return acc;
        }
        default:
            throw GroundingError("to_dnf: expression is not normalized: " + e.to_string());
        }
    }

private:
    void push_unique(std::vector<Clause> &out, Clause clause) {
        if (std::find(out.begin(), out.end(), clause) != out.end())
            return;
        out.push_back(std::move(clause));
        if (out.size() > cap_)
            throw ClauseLimitError("DNF of " + (context_.empty() ? std::string("expression") : context_) +
                                   " exceeds " + std::to_string(cap_) + " clauses");
    }

    std::size_t cap_;
    const std::string &context_;
};

} // namespace

Expression normalize(const Expression &e, const TypeHierarchy &hierarchy) {
    return Normalizer(hierarchy, nullptr).run(e, false);
}

Expression normalize(const Expression &e, const TypeHierarchy &hierarchy,
                     const std::vector<std::string> &scope) {
    return Normalizer(hierarchy, &scope).run(e, false);
}

Expression negate(const Expression &normalized) {
    switch (normalized.kind) {
    case Kind::Atom:
        return Expression::negation(normalized);
    case Kind::Not:
        return normalized.children.front();
    case Kind::True:
        return Expression::falsity();
    case Kind::False:
        return Expression::truth();
    case Kind::And:
    case Kind::Or: {
        std::vector<Expression> parts;
        for (const auto &c : normalized.children)
            parts.push_back(negate(c));
        return make_nary(normalized.kind == Kind::And ? Kind::Or : Kind::And, std::move(parts));
    }
    default:
        throw GroundingError("negate: expression is not normalized: " + normalized.to_string());
    }
}

std::vector<Clause> to_dnf(const Expression &e, std::size_t max_clauses, const std::string &context) {
    return DnfBuilder(max_clauses, context).run(e);
}

} // namespace htn
