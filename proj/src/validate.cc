#include "htn/validate.h"

#include "htn/serialize.h"

#include <algorithm>

namespace htn {

std::string Violation::to_string() const {
    std::string out;
    if (step >= 0)
        out += "step " + std::to_string(step) + ": ";
    if (node >= 0)
        out += "node " + std::to_string(node) + ": ";
    if (state >= 0)
        out += "state " + std::to_string(state) + ": ";
    return out + reason;
}

namespace {

std::string unmet(const GroundProblem &gp, const std::vector<PropId> &pos,
                  const std::vector<PropId> &neg, const State &s) {
    for (PropId p : pos)
        if (!s.contains(p))
            return gp.table.atom(p).to_string() + " does not hold";
    for (PropId p : neg)
        if (s.contains(p))
            return gp.table.atom(p).to_string() + " holds";
    return "";
}

// states[i] is the state after the first i actions; empty when some action
// is inapplicable (the violation is returned instead).
std::optional<Violation> simulate(const GroundProblem &gp, const Plan &plan,
                                  std::vector<State> &states) {
    states.assign(1, gp.state0);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i] >= gp.actions.size())
            return Violation{static_cast<int>(i), -1, -1,
                             "unknown action id " + std::to_string(plan[i])};
        const GroundAction &a = gp.actions[plan[i]];
        std::string why = unmet(gp, a.pre_pos, a.pre_neg, states.back());
        if (!why.empty())
            return Violation{static_cast<int>(i), static_cast<int>(i), -1,
                             a.signature() + " is not applicable: " + why};
        states.push_back(apply(a, states.back()));
    }
    return std::nullopt;
}

std::optional<Violation> check_goal_state(const GroundProblem &gp, const std::vector<State> &states) {
    std::string why = unmet(gp, gp.goal_state_pos, gp.goal_state_neg, states.back());
    if (!why.empty())
        return Violation{-1, static_cast<int>(states.size()) - 1, -1, "goal state: " + why};
    return std::nullopt;
}

} // namespace

std::optional<Violation> validate_plan(const GroundProblem &gp, const Plan &plan) {
    std::vector<State> states;
    if (auto v = simulate(gp, plan, states))
        return v;
    return check_goal_state(gp, states);
}

namespace {

class TraceChecker {
public:
    TraceChecker(const GroundProblem &gp, const Plan &plan, const DecompositionTrace &trace,
                 const std::vector<State> &states)
        : gp_(gp), plan_(plan), trace_(trace), states_(states), children_(trace.children()) {}

    std::optional<Violation> run() {
        if (trace_.nodes.empty() || trace_.nodes[0].method != -1 || trace_.nodes[0].parent != -1)
            return fail(-1, -1, "node 0 must be the goal network");
        covered_.assign(plan_.size(), 0);
        for (std::size_t n = 0; n < trace_.nodes.size(); ++n)
            if (auto v = check_node(static_cast<int>(n)))
                return v;
        for (std::size_t i = 0; i < covered_.size(); ++i)
            if (covered_[i] != 1)
                return Violation{static_cast<int>(i), -1, -1,
                                 "action is covered by " + std::to_string(covered_[i]) +
                                     " primitive subtasks"};
        return std::nullopt;
    }

private:
    static std::optional<Violation> fail(int node, int state, std::string reason) {
        return Violation{-1, state, node, std::move(reason)};
    }

    const std::vector<TaskId> &subtasks(const TraceNode &n) const {
        return n.method < 0 ? gp_.goal_tasks : gp_.methods[n.method].subtasks;
    }
    const std::vector<std::string> &tags(const TraceNode &n) const {
        return n.method < 0 ? gp_.goal_tags : gp_.methods[n.method].tags;
    }
    const std::vector<GroundConstraint> &constraints(const TraceNode &n) const {
        return n.method < 0 ? gp_.root_constraints : gp_.methods[n.method].residual_constraints;
    }

    std::string name(const TraceNode &n) const {
        return n.method < 0 ? "goal network" : gp_.methods[n.method].signature();
    }

    std::optional<Violation> check_node(int id) {
        const TraceNode &n = trace_.nodes[id];
        if (n.method >= static_cast<int>(gp_.methods.size()))
            return fail(id, -1, "unknown method id " + std::to_string(n.method));
        const auto &tasks = subtasks(n);
        if (n.spans.size() != tasks.size())
            return fail(id, -1, name(n) + ": expected " + std::to_string(tasks.size()) + " spans");
        const int last = static_cast<int>(plan_.size());
        for (const auto &s : n.spans)
            if (s.lo < 0 || s.hi < s.lo || s.hi > last)
                return fail(id, -1, name(n) + ": span out of range");

        // Method start and its compiled precondition.
        int start = 0;
        if (n.method >= 0) {
            if (n.parent < 0 || n.parent >= id)
                return fail(id, -1, name(n) + ": bad parent link");
            const TraceNode &p = trace_.nodes[n.parent];
            const auto &ptasks = subtasks(p);
            if (n.parent_slot < 0 || n.parent_slot >= static_cast<int>(ptasks.size()))
                return fail(id, -1, name(n) + ": bad parent slot");
            if (ptasks[n.parent_slot] != gp_.methods[n.method].task)
                return fail(id, -1, name(n) + " does not decompose " +
                                        gp_.tasks[ptasks[n.parent_slot]].to_string());
            start = p.spans[n.parent_slot].lo;
            const GroundMethod &m = gp_.methods[n.method];
            std::string why = unmet(gp_, m.pre_pos, m.pre_neg, states_[start]);
            if (!why.empty())
                return fail(id, start, name(n) + " precondition: " + why);
        }

        // Subtask spans against the plan and the child nodes.
        std::vector<int> child_of(tasks.size(), -1);
        for (int c : children_[id]) {
            int slot = trace_.nodes[c].parent_slot;
            if (slot < 0 || slot >= static_cast<int>(tasks.size()) || child_of[slot] >= 0)
                return fail(c, -1, "bad parent slot");
            child_of[slot] = c;
        }
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const GroundTask &t = gp_.tasks[tasks[i]];
            const Span &s = n.spans[i];
            if (t.primitive) {
                if (s.hi != s.lo + 1)
                    return fail(id, -1, name(n) + ": primitive subtask " + tags(n)[i] +
                                            " must span one action");
                if (gp_.actions[plan_[s.lo]].signature() != t.to_string())
                    return fail(id, -1, name(n) + ": action " + std::to_string(s.lo) +
                                            " does not realize " + t.to_string());
                ++covered_[s.lo];
                continue;
            }
            if (child_of[i] < 0)
                return fail(id, -1, name(n) + ": compound subtask " + tags(n)[i] +
                                        " is not decomposed");
            const auto &cs = trace_.nodes[child_of[i]].spans;
            if (!cs.empty()) {
                int lo = s.hi, hi = s.lo;
                for (const auto &x : cs) {
                    if (x.hi > x.lo) {
                        lo = std::min(lo, x.lo);
                        hi = std::max(hi, x.hi);
                    }
                }
                if (lo < s.lo || hi > s.hi)
                    return fail(id, -1, name(n) + ": span of " + tags(n)[i] +
                                            " does not cover its decomposition");
            }
        }

        for (const auto &c : constraints(n))
            if (auto v = check_constraint(id, n, c))
                return v;
        return std::nullopt;
    }

    int first_lo(const TraceNode &n, const std::vector<int> &group) const {
        int lo = n.spans.at(group.front()).lo;
        for (int g : group)
            lo = std::min(lo, n.spans.at(g).lo);
        return lo;
    }
    int last_hi(const TraceNode &n, const std::vector<int> &group) const {
        int hi = n.spans.at(group.front()).hi;
        for (int g : group)
            hi = std::max(hi, n.spans.at(g).hi);
        return hi;
    }

    std::optional<Violation> check_constraint(int id, const TraceNode &n, const GroundConstraint &c) {
        const std::string text = to_string(gp_, c, tags(n));
        switch (c.kind) {
        case Constraint::Kind::Series:
            for (std::size_t i = 0; i + 1 < c.group.size(); ++i) {
                const Span &a = n.spans.at(c.group[i]);
                const Span &b = n.spans.at(c.group[i + 1]);
                if (a.hi > b.lo)
                    return fail(id, -1, name(n) + ": " + text + " violated: " +
                                            tags(n)[c.group[i]] + " does not end before " +
                                            tags(n)[c.group[i + 1]] + " starts");
            }
            return std::nullopt;
        case Constraint::Kind::Before: {
            int s = first_lo(n, c.group);
            if (!c.formula.holds(states_[s]))
                return fail(id, s, name(n) + ": " + text + " violated");
            return std::nullopt;
        }
        case Constraint::Kind::After: {
            int s = last_hi(n, c.group);
            if (!c.formula.holds(states_[s]))
                return fail(id, s, name(n) + ": " + text + " violated");
            return std::nullopt;
        }
        case Constraint::Kind::Between: {
            int from = last_hi(n, c.group), to = first_lo(n, c.group2);
            for (int s = from; s <= to; ++s)
                if (!c.formula.holds(states_[s]))
                    return fail(id, s, name(n) + ": " + text + " violated");
            return std::nullopt;
        }
        }
        return std::nullopt;
    }

    const GroundProblem &gp_;
    const Plan &plan_;
    const DecompositionTrace &trace_;
    const std::vector<State> &states_;
    std::vector<std::vector<int>> children_;
    std::vector<int> covered_;
};

} // namespace

std::optional<Violation> validate_trace(const GroundProblem &gp, const Plan &plan,
                                        const DecompositionTrace &trace) {
    std::vector<State> states;
    if (auto v = simulate(gp, plan, states))
        return v;
    if (auto v = TraceChecker(gp, plan, trace, states).run())
        return v;
    return check_goal_state(gp, states);
}

} // namespace htn
