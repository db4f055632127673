#ifndef HTN_EXPRESSION_H
#define HTN_EXPRESSION_H

#include <map>
#include <string>
#include <vector>

namespace htn {

class TypeHierarchy;

struct Term {
    enum class Kind { Variable, Constant };

    Kind kind = Kind::Constant;
    std::string name;

    static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
    static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }

    bool is_variable() const { return kind == Kind::Variable; }
    bool operator==(const Term &) const = default;
    auto operator<=>(const Term &) const = default;
};

struct TypedVariable {
    std::string name;
    std::string type;

    bool operator==(const TypedVariable &) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    bool is_ground() const;
    // "(pred a b)"; also the interning key for ground atoms.
    std::string to_string() const;

    bool operator==(const Atom &) const = default;
    auto operator<=>(const Atom &) const = default;
};

/*
  Variable -> constant bindings. `bind` checks the constant against the
  variable's declared type; `bind_unchecked` is for callers that enumerate
  typed instances themselves.
*/
class Substitution {
public:
    void bind(const TypedVariable &var, const std::string &constant,
              const TypeHierarchy &hierarchy);
    void bind_unchecked(const std::string &var, const std::string &constant);
    void unbind(const std::string &var);

    const std::string *lookup(const std::string &var) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::map<std::string, std::string> &bindings() const { return map_; }

private:
    std::map<std::string, std::string> map_;
};

struct Expression {
    enum class Kind { Atom, Not, And, Or, Imply, Forall, Exists, True, False };

    Kind kind = Kind::True;
    Atom atom;                         // Kind::Atom
    std::vector<Expression> children;  // Not: 1, Imply: 2, quantifiers: 1 (body)
    TypedVariable bound;               // quantified variable

    static Expression truth() { return Expression{Kind::True, {}, {}, {}}; }
    static Expression falsity() { return Expression{Kind::False, {}, {}, {}}; }
    static Expression make_atom(Atom a);
    static Expression negation(Expression e);
    static Expression conjunction(std::vector<Expression> parts);
    static Expression disjunction(std::vector<Expression> parts);
    static Expression implication(Expression lhs, Expression rhs);
    static Expression forall(TypedVariable var, Expression body);
    static Expression exists(TypedVariable var, Expression body);

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_true() const { return kind == Kind::True; }
    bool is_false() const { return kind == Kind::False; }
    // Atom or negated atom.
    bool is_literal() const;

    std::string to_string() const;

    bool operator==(const Expression &) const = default;
};

Atom substitute(const Atom &atom, const Substitution &sigma);
Expression substitute(const Expression &e, const Substitution &sigma);

// Variables occurring free in `e`, in order of first occurrence.
std::vector<std::string> free_variables(const Expression &e);
void collect_atoms(const Expression &e, std::vector<Atom> &out);

} // namespace htn

#endif
