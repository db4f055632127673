#ifndef HTN_GROUND_ACTIONS_H
#define HTN_GROUND_ACTIONS_H

#include "htn/domain.h"
#include "htn/ground_model.h"
#include "htn/normalize.h"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace htn {

// Ground atoms keyed by Atom::to_string().
using AtomSet = std::unordered_set<std::string>;

AtomSet make_atom_set(const std::vector<Atom> &atoms);

struct GroundingOptions {
    // Inertia-based simplification of atoms, actions and methods.
    bool simplify = true;
    // Evaluate conjuncts as soon as their variables are bound and cut the
    // enumeration on False. Only meaningful with `simplify`.
    bool prune_early = true;
    // Delete methods whose compound subtasks have no surviving method.
    bool method_fixpoint = true;
    std::size_t clause_cap = kDefaultClauseCap;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class InertiaClass { Fluent, PositiveInertia, NegativeInertia, Both };

const char *to_string(InertiaClass c);

struct InertiaFlags {
    // Never produced by an operator (absent from every positive effect).
    bool positive_inertia = true;
    // Never consumed by an operator (absent from every negative effect).
    bool negative_inertia = true;

    InertiaClass classify() const;
};

struct InertiaReport {
    std::map<std::string, InertiaFlags> predicates;

    InertiaFlags of(const std::string &predicate) const;
    std::string to_string() const;
};

// Single pass over the operator effects.
InertiaReport compute_inertia(const std::vector<OperatorSchema> &operators,
                              const std::vector<PredicateSignature> &predicates);

enum class AtomValue { True, False, Keep };

AtomValue simplify_atom(const Atom &p, const InertiaReport &inertia, const AtomSet &s0);

// Replaces every ground atom of `e` that inertia decides by True/False.
Expression evaluate_inertia(const Expression &e, const InertiaReport &inertia, const AtomSet &s0);

/*
  Applies, bottom-up and to a fixpoint:
    not T = F        not F = T
    T and x = x      F and x = F      x and x = x      x and not x = F
    T or x = T       F or x = x       x or x = x       x or not x = T
  The input must be normalized.
*/
Expression simplify_expression(const Expression &e);

// Product of the parameter domain sizes; saturates at UINT64_MAX.
std::uint64_t estimate_grounding_size(const std::vector<TypedVariable> &params,
                                      const TypeHierarchy &hierarchy);

struct OperatorStats {
    std::string name;
    std::uint64_t candidates = 0;
    std::uint64_t kept = 0;
    std::uint64_t deleted_precondition = 0;
    std::uint64_t deleted_effect = 0;
    std::uint64_t deleted_noop = 0;
    std::uint64_t actions = 0; // after splitting DNF clauses
};

// An instantiated operator whose atoms have been evaluated against inertia.
struct ActionCandidate {
    std::size_t schema = 0;
    std::string name;
    std::vector<std::string> args;
    Expression precondition;
    Expression effect;
    bool had_effects = false;
};

// Operators must be normalized (see normalize_operators). Candidates come
// out in schema order, then in lexicographic substitution order.
std::vector<ActionCandidate> instantiate_operators(const std::vector<OperatorSchema> &operators,
                                                   const TypeHierarchy &hierarchy,
                                                   const InertiaReport &inertia, const AtomSet &s0,
                                                   const GroundingOptions &options,
                                                   std::vector<OperatorStats> *stats = nullptr);

// Deletes candidates whose precondition or effect simplifies to False, and
// candidates whose (non-empty) effects all simplify to True.
std::vector<ActionCandidate> simplify_actions(std::vector<ActionCandidate> candidates,
                                              std::vector<OperatorStats> *stats = nullptr);

// One GroundAction per DNF clause of each candidate's precondition.
std::vector<GroundAction> build_ground_actions(const std::vector<ActionCandidate> &candidates,
                                               PropositionTable &table, std::size_t clause_cap,
                                               std::vector<OperatorStats> *stats = nullptr);

std::vector<OperatorSchema> normalize_operators(const std::vector<OperatorSchema> &operators,
                                                const TypeHierarchy &hierarchy);

// instantiate -> simplify -> build.
std::vector<GroundAction> ground_operators(const std::vector<OperatorSchema> &normalized,
                                           const TypeHierarchy &hierarchy,
                                           const InertiaReport &inertia, const AtomSet &s0,
                                           const GroundingOptions &options, PropositionTable &table,
                                           std::vector<OperatorStats> *stats = nullptr);

void check_deadline(const GroundingOptions &options);

} // namespace htn

#endif
