#ifndef HTN_GROUND_MODEL_H
#define HTN_GROUND_MODEL_H

#include "htn/domain.h"
#include "htn/expression.h"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace htn {

using PropId = std::uint32_t;
using TaskId = std::uint32_t;

// Bijection between ground atoms and dense ids 0..n-1.
class PropositionTable {
public:
    PropId intern(const Atom &atom);
    std::optional<PropId> find(const Atom &atom) const;
    std::optional<PropId> find(const std::string &key) const;
    const Atom &atom(PropId id) const { return atoms_[id]; }
    std::size_t size() const { return atoms_.size(); }

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

private:
    std::vector<Atom> atoms_;
    std::unordered_map<std::string, PropId> index_;
    bool frozen_ = false;
};

// A set of proposition ids stored as a bit vector.
class State {
public:
    State() = default;
    explicit State(std::size_t num_props);

    bool contains(PropId id) const {
        return id < num_bits_ && (words_[id >> 6] >> (id & 63)) & 1u;
    }
    void insert(PropId id);
    void erase(PropId id);

    std::size_t num_bits() const { return num_bits_; }
    std::size_t count() const;
    std::vector<PropId> ids() const;
    std::uint64_t hash() const;

    bool operator==(const State &other) const;

private:
    std::vector<std::uint64_t> words_;
    std::size_t num_bits_ = 0;
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    // DNF clause of the precondition this action was built from.
    int clause = 0;
    std::vector<PropId> pre_pos;
    std::vector<PropId> pre_neg;
    std::vector<PropId> eff_pos;
    std::vector<PropId> eff_neg;

    std::string signature() const;
};

bool applicable(const GroundAction &a, const State &s);
State apply(const GroundAction &a, const State &s);

struct GroundTask {
    std::string name;
    std::vector<std::string> args;
    bool primitive = false;

    std::string to_string() const;
    bool operator==(const GroundTask &) const = default;
};

struct GroundClause {
    std::vector<PropId> pos;
    std::vector<PropId> neg;

    bool holds(const State &s) const;
    bool operator==(const GroundClause &) const = default;
};

// A ground formula in disjunctive normal form. No clauses is false; a single
// empty clause is true.
struct GroundFormula {
    std::vector<GroundClause> clauses;

    static GroundFormula truth() { return GroundFormula{{GroundClause{}}}; }
    static GroundFormula falsity() { return GroundFormula{}; }

    bool holds(const State &s) const;
    bool is_true() const { return clauses.size() == 1 && clauses[0].pos.empty() && clauses[0].neg.empty(); }
    bool is_false() const { return clauses.empty(); }
    bool operator==(const GroundFormula &) const = default;
};

// Tags are resolved to subtask positions of the owning method (or goal network).
struct GroundConstraint {
    Constraint::Kind kind = Constraint::Kind::Series;
    GroundFormula formula;
    std::vector<int> group;
    std::vector<int> group2;

    bool operator==(const GroundConstraint &) const = default;
};

struct GroundMethod {
    std::string name;
    std::vector<std::string> args; // parameters then free variables
    std::size_t num_params = 0;
    int clause = 0;
    TaskId task = 0;
    std::vector<TaskId> subtasks;
    std::vector<std::string> tags;
    std::vector<PropId> pre_pos;
    std::vector<PropId> pre_neg;
    std::vector<GroundConstraint> residual_constraints;

    std::string signature() const;
};

struct GroundProblem {
    PropositionTable table;
    State state0;
    std::vector<GroundTask> tasks;
    // Keyed by GroundTask::to_string().
    std::unordered_map<std::string, TaskId> task_index;
    std::vector<TaskId> goal_tasks;
    std::vector<std::string> goal_tags;
    std::vector<PropId> goal_state_pos;
    std::vector<PropId> goal_state_neg;
    // Goal-network constraints not compiled into the goal state.
    std::vector<GroundConstraint> root_constraints;
    std::vector<GroundAction> actions;
    std::vector<GroundMethod> methods;
    // Per task id: indices into `actions` for primitive tasks, into `methods`
    // for compound ones, in canonical order.
    std::vector<std::vector<std::uint32_t>> relevance;

    std::optional<TaskId> find_task(const GroundTask &task) const;
    // Actions whose name and arguments match `signature` ("(name a b)").
    std::vector<std::uint32_t> find_actions(const std::string &signature) const;
    bool goal_state_holds(const State &s) const;
};

using Plan = std::vector<std::uint32_t>;

struct Span {
    int lo = 0; // plan index of the first action
    int hi = 0; // one past the last action

    bool operator==(const Span &) const = default;
};

struct TraceNode {
    int method = -1; // index into GroundProblem::methods; -1 for the goal network
    int parent = -1;
    int parent_slot = -1; // subtask position within the parent
    std::vector<Span> spans;
};

// Method applications; node 0 is the goal network. Children are recovered
// through parent links.
struct DecompositionTrace {
    std::vector<TraceNode> nodes;

    std::vector<std::vector<int>> children() const;
};

} // namespace htn

#endif
