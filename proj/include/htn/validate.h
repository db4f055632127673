#ifndef HTN_VALIDATE_H
#define HTN_VALIDATE_H

#include "htn/ground_model.h"

#include <optional>
#include <string>

namespace htn {

struct Violation {
    int step = -1;  // plan index of the offending action
    int state = -1; // state index (state i follows the first i actions)
    int node = -1;  // trace node
    std::string reason;

    std::string to_string() const;
};

// Executes `plan` from the initial state and checks the goal state.
std::optional<Violation> validate_plan(const GroundProblem &gp, const Plan &plan);

/*
  Checks `trace` against `plan`: the leaves must be the plan, every method
  must decompose the task it sits under, method preconditions must hold
  where the method starts, and every residual constraint (of the methods
  and of the goal network) must hold on the state sequence.
*/
std::optional<Violation> validate_trace(const GroundProblem &gp, const Plan &plan,
                                        const DecompositionTrace &trace);

} // namespace htn

#endif
