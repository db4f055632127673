#ifndef HTN_NORMALIZE_H
#define HTN_NORMALIZE_H

#include "htn/error.h"
#include "htn/expression.h"

#include <string>
#include <vector>

namespace htn {

class TypeHierarchy;

/*
  Rewrites `e` into negation normal form over And/Or/literals/True/False:
  implications become (or (not a) b), forall/exists expand to a
  conjunction/disjunction over the instances of the quantified type, and
  negations are pushed onto atoms. Nested conjunctions and disjunctions are
  flattened; no other constant folding happens here.

  With `scope`, every variable left free in an expanded quantifier body must
  be listed there, otherwise a TypingError is thrown.
*/
Expression normalize(const Expression &e, const TypeHierarchy &hierarchy);
Expression normalize(const Expression &e, const TypeHierarchy &hierarchy,
                     const std::vector<std::string> &scope);

// Negation of a normalized expression, itself normalized.
Expression negate(const Expression &normalized);

struct Literal {
    Atom atom;
    bool positive = true;

    bool operator==(const Literal &) const = default;
};

using Clause = std::vector<Literal>;

inline constexpr std::size_t kDefaultClauseCap = 4096;

class ClauseLimitError : public GroundingError {
public:
    using GroundingError::GroundingError;
};

// Disjunction of conjunctions equivalent to the normalized `e`. Clauses come
// out in input order; contradictory clauses are dropped and duplicate
// literals merged. True gives one empty clause, False none.
std::vector<Clause> to_dnf(const Expression &e, std::size_t max_clauses = kDefaultClauseCap,
                           const std::string &context = "");

} // namespace htn

#endif
