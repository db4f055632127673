#ifndef HTN_GROUND_METHODS_H
#define HTN_GROUND_METHODS_H

#include "htn/domain.h"
#include "htn/ground_actions.h"
#include "htn/ground_model.h"
#include "htn/normalize.h"

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace htn {

// Normalizes the formulas of before/after/between constraints.
std::vector<MethodSchema> normalize_methods(const std::vector<MethodSchema> &methods,
                                            const TypeHierarchy &hierarchy);

/*
  Types every free variable of `m`. Candidates come from the parameter
  declarations of the operators/methods relevant for each subtask that
  mentions the variable, and from the predicate declarations of constraint
  atoms that mention it. Within each source the most specific type wins;
  across the two sources the type without subtypes is kept. Unrelated
  candidates raise TypingError.
*/
MethodSchema infer_method_var_types(const MethodSchema &m, const Domain &domain);

// normalize_methods followed by infer_method_var_types on every method.
std::vector<MethodSchema> prepare_methods(const Domain &domain);

struct MethodStats {
    std::string name;
    std::uint64_t candidates = 0;
    std::uint64_t kept = 0;
    std::uint64_t deleted_constraint = 0;
    std::uint64_t deleted_task = 0;
    std::uint64_t methods = 0; // after splitting precondition clauses
};

struct CandidateConstraint {
    Constraint::Kind kind = Constraint::Kind::Series;
    Expression formula;
    std::vector<int> group;
    std::vector<int> group2;
    // Filled by simplify_methods_by_constraints.
    std::vector<Clause> dnf;
};

struct MethodCandidate {
    std::size_t schema = 0;
    std::string name;
    std::vector<std::string> args;
    std::size_t num_params = 0;
    GroundTask task;
    std::vector<GroundTask> subtasks;
    std::vector<std::string> tags;
    std::vector<CandidateConstraint> constraints;
    // Anchored before constraints in DNF; filled by
    // simplify_methods_by_constraints.
    std::vector<Clause> precondition;
};

// "(before (false) t1)"; groups of one tag are printed bare.
std::string to_string(const CandidateConstraint &c, const std::vector<std::string> &tags);

// True if the constraint is a before whose group holds the first subtask.
bool is_anchored_before(const CandidateConstraint &c);

// Signatures ("(name a b)") of the surviving ground actions.
std::unordered_set<std::string> action_signatures(const std::vector<GroundAction> &actions);

/*
  One candidate per type-consistent binding of params then free variables,
  in schema order. Constraint formulas are evaluated against inertia while
  the binding is built. With `primitive` given (and simplification on),
  bindings that produce a primitive subtask with no surviving action are cut
  as well; `task_deleted` is set when that happens.
*/
std::vector<MethodCandidate>
instantiate_methods(const std::vector<MethodSchema> &methods, const TypeHierarchy &hierarchy,
                    const InertiaReport &inertia, const AtomSet &s0,
                    const GroundingOptions &options,
                    const std::unordered_set<std::string> *primitive = nullptr,
                    std::vector<MethodStats> *stats = nullptr, bool *task_deleted = nullptr);

// Drops constraints whose formula is True and deletes candidates holding a
// False (or unsatisfiable) one.
std::vector<MethodCandidate> simplify_methods_by_constraints(std::vector<MethodCandidate> candidates,
                                                             std::size_t clause_cap = kDefaultClauseCap,
                                                             std::vector<MethodStats> *stats = nullptr);

struct TaskSimplification {
    std::vector<MethodCandidate> methods;
    // Index of the last sweep that deleted something; sweep 1 is the
    // primitive pass, later sweeps look at compound subtasks.
    int iterations = 0;
};

// `already_deleted` reports deletions made by the primitive check during
// instantiation, so they count towards sweep 1.
TaskSimplification simplify_methods_by_tasks(std::vector<MethodCandidate> candidates,
                                             const std::unordered_set<std::string> &primitive,
                                             bool fixpoint, bool already_deleted = false,
                                             std::vector<MethodStats> *stats = nullptr);

// Interns the surviving candidates into `gp` (tasks, propositions, methods)
// and fills gp.relevance. Actions must already be in gp.
void add_ground_methods(const std::vector<MethodCandidate> &candidates, GroundProblem &gp,
                        std::vector<MethodStats> *stats = nullptr);

TaskId intern_task(const GroundTask &task, GroundProblem &gp);
GroundFormula intern_formula(const std::vector<Clause> &dnf, PropositionTable &table);

// Per task id: the matching actions (primitive) or methods (compound).
void build_relevance(GroundProblem &gp);

} // namespace htn

#endif
