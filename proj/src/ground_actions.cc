#include "htn/ground_actions.h"

#include "binding_enumerator.h"

#include <algorithm>
#include <sstream>

namespace htn {

using detail::BindingEnumerator;
using detail::binding_depth;
using detail::top_level_conjuncts;

AtomSet make_atom_set(const std::vector<Atom> &atoms) {
    AtomSet out;
    for (const auto &a : atoms)
        out.insert(a.to_string());
    return out;
}

void check_deadline(const GroundingOptions &options) {
    if (options.deadline && std::chrono::steady_clock::now() >= *options.deadline)
        throw TimeoutError("grounding exceeded the time limit");
}

const char *to_string(InertiaClass c) {
    switch (c) {
    case InertiaClass::Fluent:
        return "fluent";
    case InertiaClass::PositiveInertia:
        return "pos-inertia";
    case InertiaClass::NegativeInertia:
        return "neg-inertia";
    case InertiaClass::Both:
        return "both";
    }
    return "?";
}

InertiaClass InertiaFlags::classify() const {
    if (positive_inertia && negative_inertia)
        return InertiaClass::Both;
    if (positive_inertia)
        return InertiaClass::PositiveInertia;
    if (negative_inertia)
        return InertiaClass::NegativeInertia;
    return InertiaClass::Fluent;
}

InertiaFlags InertiaReport::of(const std::string &predicate) const {
    auto it = predicates.find(predicate);
    return it == predicates.end() ? InertiaFlags{} : it->second;
}

std::string InertiaReport::to_string() const {
    std::ostringstream out;
    for (const auto &[name, flags] : predicates)
        out << name << " " << htn::to_string(flags.classify()) << "\n";
    return out.str();
}

namespace {

void scan_effect(const Expression &e, bool negated, InertiaReport &report) {
    switch (e.kind) {
    case Expression::Kind::Atom: {
        auto &flags = report.predicates[e.atom.predicate];
        if (negated)
            flags.negative_inertia = false;
        else
            flags.positive_inertia = false;
        break;
    }
    case Expression::Kind::Not:
        scan_effect(e.children.front(), !negated, report);
        break;
    default:
        for (const auto &c : e.children)
            scan_effect(c, negated, report);
    }
}

} // namespace

InertiaReport compute_inertia(const std::vector<OperatorSchema> &operators,
                              const std::vector<PredicateSignature> &predicates) {
    InertiaReport report;
    for (const auto &p : predicates)
        report.predicates[p.name] = InertiaFlags{};
    for (const auto &op : operators)
        scan_effect(op.effect, false, report);
    return report;
}

AtomValue simplify_atom(const Atom &p, const InertiaReport &inertia, const AtomSet &s0) {
    InertiaFlags flags = inertia.of(p.predicate);
    bool in_init = s0.count(p.to_string()) > 0;
    if (flags.positive_inertia && !in_init)
        return AtomValue::False;
    if (flags.negative_inertia && in_init)
        return AtomValue::True;
    return AtomValue::Keep;
}

Expression evaluate_inertia(const Expression &e, const InertiaReport &inertia, const AtomSet &s0) {
    if (e.kind == Expression::Kind::Atom) {
        if (!e.atom.is_ground())
            return e;
        switch (simplify_atom(e.atom, inertia, s0)) {
        case AtomValue::True:
            return Expression::truth();
        case AtomValue::False:
            return Expression::falsity();
        case AtomValue::Keep:
            return e;
        }
    }
    Expression out = e;
    for (auto &c : out.children)
        c = evaluate_inertia(c, inertia, s0);
    return out;
}

namespace {

using Kind = Expression::Kind;

Expression simplify_once(const Expression &e) {
    switch (e.kind) {
    case Kind::Not: {
        Expression inner = simplify_once(e.children.front());
        if (inner.is_true())
            return Expression::falsity();
        if (inner.is_false())
            return Expression::truth();
        if (inner.kind == Kind::Not)
            return inner.children.front();
        if (!inner.is_atom())
            return negate(inner);
        return Expression::negation(std::move(inner));
    }
    case Kind::And:
    case Kind::Or: {
        const bool conj = e.kind == Kind::And;
        const Kind absorbing = conj ? Kind::False : Kind::True;
        const Kind neutral = conj ? Kind::True : Kind::False;
        std::vector<Expression> parts;
        auto add = [&](Expression c) {
            if (std::find(parts.begin(), parts.end(), c) == parts.end())
                parts.push_back(std::move(c));
        };
        for (const auto &child : e.children) {
            Expression c = simplify_once(child);
            if (c.kind == absorbing)
                return c;
            if (c.kind == neutral)
                continue;
            if (c.kind == e.kind) {
                for (auto &g : c.children)
                    add(std::move(g));
            } else {
                add(std::move(c));
            }
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Expression complement = negate(parts[i]);
            for (std::size_t j = i + 1; j < parts.size(); ++j)
                if (parts[j] == complement)
                    return conj ? Expression::falsity() : Expression::truth();
        }
        if (parts.empty())
            return conj ? Expression::truth() : Expression::falsity();
        if (parts.size() == 1)
            return std::move(parts.front());
        return conj ? Expression::conjunction(std::move(parts))
                    : Expression::disjunction(std::move(parts));
    }
    default:
        return e;
    }
}

} // namespace

Expression simplify_expression(const Expression &e) {
    Expression cur = simplify_once(e);
    while (true) {
        Expression next = simplify_once(cur);
        if (next == cur)
            return cur;
        cur = std::move(next);
    }
}

std::uint64_t estimate_grounding_size(const std::vector<TypedVariable> &params,
                                      const TypeHierarchy &hierarchy) {
    std::uint64_t n = 1;
    for (const auto &p : params)
        n = detail::saturating_mul(n, hierarchy.count_instances(p.type));
    return n;
}

std::vector<OperatorSchema> normalize_operators(const std::vector<OperatorSchema> &operators,
                                                const TypeHierarchy &hierarchy) {
    std::vector<OperatorSchema> out;
    for (const auto &op : operators) {
        std::vector<std::string> scope;
        for (const auto &p : op.params)
            scope.push_back(p.name);
        OperatorSchema n = op;
        n.precondition = normalize(op.precondition, hierarchy, scope);
        n.effect = normalize(op.effect, hierarchy, scope);
        for (const auto &lit : top_level_conjuncts(n.effect))
            if (!lit.is_literal() && !lit.is_true())
                throw GroundingError("effect of '" + op.name +
                                     "' is not a conjunction of literals: " + n.effect.to_string());
        out.push_back(std::move(n));
    }
    return out;
}

namespace {

struct StagedConjuncts {
    std::vector<Expression> parts;
    std::vector<std::vector<std::size_t>> by_depth;

    StagedConjuncts(const Expression &e, const std::vector<TypedVariable> &vars)
        : by_depth(vars.size() + 1) {
        if (!e.is_true())
            parts = top_level_conjuncts(e);
        for (std::size_t i = 0; i < parts.size(); ++i)
            by_depth[binding_depth(parts[i], vars)].push_back(i);
    }
};

} // namespace

std::vector<ActionCandidate> instantiate_operators(const std::vector<OperatorSchema> &operators,
                                                   const TypeHierarchy &hierarchy,
                                                   const InertiaReport &inertia, const AtomSet &s0,
                                                   const GroundingOptions &options,
                                                   std::vector<OperatorStats> *stats) {
    std::vector<ActionCandidate> out;
    const bool eager = options.simplify && options.prune_early;
    std::size_t ticks = 0;
    auto tick = [&]() {
        if ((++ticks & 4095) == 0)
            check_deadline(options);
    };
    for (std::size_t o = 0; o < operators.size(); ++o) {
        const OperatorSchema &op = operators[o];
        OperatorStats st;
        st.name = op.name;
        BindingEnumerator en(op.params, hierarchy);
        st.candidates = en.total();

        StagedConjuncts pre(op.precondition, op.params);
        StagedConjuncts eff(op.effect, op.params);
        std::vector<Expression> pre_val(pre.parts.size());
        std::vector<Expression> eff_val(eff.parts.size());
        const std::size_t k = op.params.size();

        auto eval = [&](const Expression &part, const Substitution &sigma) {
            Expression g = substitute(part, sigma);
            if (options.simplify)
                g = simplify_expression(evaluate_inertia(g, inertia, s0));
            return g;
        };
        auto stage = [&](std::size_t d, const Substitution &sigma) {
            if (!eager && d != k)
                return true;
            // Without eager evaluation everything is evaluated at the leaf.
            const std::size_t lo = eager ? d : 0;
            for (std::size_t depth = lo; depth <= d; ++depth) {
                for (std::size_t i : pre.by_depth[depth]) {
                    pre_val[i] = eval(pre.parts[i], sigma);
                    if (eager && pre_val[i].is_false()) {
                        st.deleted_precondition += en.subtree_size(d);
                        return false;
                    }
                }
                for (std::size_t i : eff.by_depth[depth]) {
                    eff_val[i] = eval(eff.parts[i], sigma);
                    if (eager && eff_val[i].is_false()) {
                        st.deleted_effect += en.subtree_size(d);
                        return false;
                    }
                }
            }
            return true;
        };
        auto leaf = [&](const Substitution &sigma) {
            ActionCandidate c;
            c.schema = o;
            c.name = op.name;
            for (const auto &p : op.params)
                c.args.push_back(*sigma.lookup(p.name));
            c.precondition = Expression::conjunction(pre_val);
            c.effect = Expression::conjunction(eff_val);
            if (options.simplify && !eager) {
                c.precondition = simplify_expression(c.precondition);
                c.effect = simplify_expression(c.effect);
            }
            c.had_effects = !eff.parts.empty();
            out.push_back(std::move(c));
        };
        en.run(stage, leaf, tick);
        if (stats)
            stats->push_back(st);
    }
    return out;
}

namespace {

OperatorStats &stats_for(std::vector<OperatorStats> *stats, const std::string &name) {
    static OperatorStats scratch;
    if (!stats)
        return scratch;
    for (auto &s : *stats)
        if (s.name == name)
            return s;
    stats->push_back(OperatorStats{name});
    return stats->back();
}

} // namespace

std::vector<ActionCandidate> simplify_actions(std::vector<ActionCandidate> candidates,
                                              std::vector<OperatorStats> *stats) {
    std::vector<ActionCandidate> out;
    for (auto &c : candidates) {
        c.precondition = simplify_expression(c.precondition);
        c.effect = simplify_expression(c.effect);
        OperatorStats &st = stats_for(stats, c.name);
        if (c.precondition.is_false()) {
            ++st.deleted_precondition;
            continue;
        }
        if (c.effect.is_false()) {
            ++st.deleted_effect;
            continue;
        }
        if (c.effect.is_true() && c.had_effects) {
            ++st.deleted_noop;
            continue;
        }
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

std::vector<PropId> intern_sorted(const std::vector<Atom> &atoms, PropositionTable &table) {
    std::vector<PropId> ids;
    for (const auto &a : atoms)
        ids.push_back(table.intern(a));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

std::vector<GroundAction> build_ground_actions(const std::vector<ActionCandidate> &candidates,
                                               PropositionTable &table, std::size_t clause_cap,
                                               std::vector<OperatorStats> *stats) {
    std::vector<GroundAction> out;
    for (const auto &c : candidates) {
        OperatorStats &st = stats_for(stats, c.name);
        auto clauses = to_dnf(c.precondition, clause_cap, "precondition of '" + c.name + "'");
        if (clauses.empty()) {
            ++st.deleted_precondition;
            continue;
        }
        std::vector<Atom> add, del;
        for (const auto &lit : top_level_conjuncts(c.effect)) {
            if (lit.is_true())
                continue;
            if (lit.is_atom())
                add.push_back(lit.atom);
            else
                del.push_back(lit.children.front().atom);
        }
        ++st.kept;
        int index = 0;
        for (const auto &clause : clauses) {
            GroundAction a;
            a.name = c.name;
            a.args = c.args;
            a.clause = index++;
            std::vector<Atom> pos, neg;
            for (const auto &lit : clause)
                (lit.positive ? pos : neg).push_back(lit.atom);
            a.pre_pos = intern_sorted(pos, table);
            a.pre_neg = intern_sorted(neg, table);
            a.eff_pos = intern_sorted(add, table);
            a.eff_neg = intern_sorted(del, table);
            out.push_back(std::move(a));
            ++st.actions;
        }
    }
    return out;
}

std::vector<GroundAction> ground_operators(const std::vector<OperatorSchema> &normalized,
                                           const TypeHierarchy &hierarchy,
                                           const InertiaReport &inertia, const AtomSet &s0,
                                           const GroundingOptions &options, PropositionTable &table,
                                           std::vector<OperatorStats> *stats) {
    auto candidates = instantiate_operators(normalized, hierarchy, inertia, s0, options, stats);
    candidates = simplify_actions(std::move(candidates), stats);
    return build_ground_actions(candidates, table, options.clause_cap, stats);
}

} // namespace htn
