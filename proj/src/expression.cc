#include "htn/expression.h"

#include "htn/error.h"
#include "htn/type_hierarchy.h"

#include <algorithm>

namespace htn {

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term &t) { return t.is_variable(); });
}

std::string Atom::to_string() const {
    std::string out = "(" + predicate;
    for (const auto &arg : args) {
        out += ' ';
        out += arg.name;
    }
    out += ')';
    return out;
}

void Substitution::bind(const TypedVariable &var, const std::string &constant,
                        const TypeHierarchy &hierarchy) {
    const std::string &type = hierarchy.type_of(constant);
    if (!hierarchy.is_subtype(type, var.type))
        throw TypingError("cannot bind " + var.name + " - " + var.type + " to " + constant +
                          " - " + type);
    map_[var.name] = constant;
}

void Substitution::bind_unchecked(const std::string &var, const std::string &constant) {
    map_[var] = constant;
}

void Substitution::unbind(const std::string &var) {
    map_.erase(var);
}

const std::string *Substitution::lookup(const std::string &var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Expression Expression::make_atom(Atom a) {
    Expression e;
    e.kind = Kind::Atom;
    e.atom = std::move(a);
    return e;
}

Expression Expression::negation(Expression inner) {
    Expression e;
    e.kind = Kind::Not;
    e.children.push_back(std::move(inner));
    return e;
}

Expression Expression::conjunction(std::vector<Expression> parts) {
    Expression e;
    e.kind = Kind::And;
    e.children = std::move(parts);
    return e;
}

Expression Expression::disjunction(std::vector<Expression> parts) {
    Expression e;
    e.kind = Kind::Or;
    e.children = std::move(parts);
    return e;
}

Expression Expression::implication(Expression lhs, Expression rhs) {
    Expression e;
    e.kind = Kind::Imply;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

Expression Expression::forall(TypedVariable var, Expression body) {
    Expression e;
    e.kind = Kind::Forall;
    e.bound = std::move(var);
    e.children.push_back(std::move(body));
    return e;
}

Expression Expression::exists(TypedVariable var, Expression body) {
    Expression e;
    e.kind = Kind::Exists;
    e.bound = std::move(var);
    e.children.push_back(std::move(body));
    return e;
}

bool Expression::is_literal() const {
    return kind == Kind::Atom || (kind == Kind::Not && children.front().kind == Kind::Atom);
}

std::string Expression::to_string() const {
    auto join = [this](const char *head) {
        std::string out = std::string("(") + head;
        for (const auto &c : children)
            out += " " + c.to_string();
        return out + ")";
    };
    switch (kind) {
    case Kind::Atom:
        return atom.to_string();
    case Kind::Not:
        return join("not");
    case Kind::And:
        return join("and");
    case Kind::Or:
        return join("or");
    case Kind::Imply:
        return join("imply");
    case Kind::Forall:
    case Kind::Exists:
        return std::string("(") + (kind == Kind::Forall ? "forall" : "exists") + " (" +
               bound.name + " - " + bound.type + ") " + children.front().to_string() + ")";
    case Kind::True:
        return "(true)";
    case Kind::False:
        return "(false)";
    }
    return "";
}

Atom substitute(const Atom &atom, const Substitution &sigma) {
    Atom out = atom;
    for (auto &arg : out.args) {
        if (!arg.is_variable())
            continue;
        if (const std::string *c = sigma.lookup(arg.name))
            arg = Term::constant(*c);
    }
    return out;
}

Expression substitute(const Expression &e, const Substitution &sigma) {
    if (sigma.empty())
        return e;
    switch (e.kind) {
    case Expression::Kind::Atom:
        return Expression::make_atom(substitute(e.atom, sigma));
    case Expression::Kind::Forall:
    case Expression::Kind::Exists: {
        Expression out = e;
        if (sigma.lookup(e.bound.name)) {
            // The quantifier shadows the outer binding.
            Substitution inner = sigma;
            inner.unbind(e.bound.name);
            out.children.front() = substitute(e.children.front(), inner);
        } else {
            out.children.front() = substitute(e.children.front(), sigma);
        }
        return out;
    }
    default: {
        Expression out = e;
        for (auto &c : out.children)
            c = substitute(c, sigma);
        return out;
    }
    }
}

namespace {
void collect_free(const Expression &e, std::vector<std::string> &bound,
                  std::vector<std::string> &out) {
    switch (e.kind) {
    case Expression::Kind::Atom:
        for (const auto &arg : e.atom.args) {
            if (!arg.is_variable())
                continue;
            if (std::find(bound.begin(), bound.end(), arg.name) != bound.end())
                continue;
            if (std::find(out.begin(), out.end(), arg.name) == out.end())
                out.push_back(arg.name);
        }
        break;
    case Expression::Kind::Forall:
    case Expression::Kind::Exists:
        bound.push_back(e.bound.name);
        collect_free(e.children.front(), bound, out);
        bound.pop_back();
        break;
    default:
        for (const auto &c : e.children)
            collect_free(c, bound, out);
    }
}
} // namespace

std::vector<std::string> free_variables(const Expression &e) {
    std::vector<std::string> bound;
    std::vector<std::string> out;
    collect_free(e, bound, out);
    return out;
}

void collect_atoms(const Expression &e, std::vector<Atom> &out) {
    if (e.kind == Expression::Kind::Atom) {
        out.push_back(e.atom);
        return;
    }
    for (const auto &c : e.children)
        collect_atoms(c, out);
}

} // namespace htn
