#ifndef HTN_SERIALIZE_H
#define HTN_SERIALIZE_H

#include "htn/ground_model.h"

#include <string>
#include <vector>

namespace htn {

/*
  Line-oriented dump of a ground problem: propositions, initial state,
  tasks, goal network, actions, methods and relevance lists, all by id.
  Identical problems give identical text.
*/
std::string write_ground_problem(const GroundProblem &gp);

// One "(name a b)" line per action.
std::string write_plan(const GroundProblem &gp, const Plan &plan);
std::vector<std::string> read_plan(const std::string &text, const std::string &file = "");

// Maps action signatures back to action ids, picking the first precondition
// clause that applies along the simulated trajectory (the first one when
// none does). Unknown signatures raise Error.
Plan resolve_plan(const GroundProblem &gp, const std::vector<std::string> &signatures);

/*
  (trace (goal (span t1 0 3) ... (method (name args) (index i) (span t1 0 1)
  ... (constraints ...) children...)))
  Children appear in subtask order; `index` is the ground method id.
*/
std::string write_trace(const GroundProblem &gp, const DecompositionTrace &trace);
DecompositionTrace read_trace(const GroundProblem &gp, const std::string &text,
                              const std::string &file = "");

std::string to_string(const GroundProblem &gp, const GroundFormula &f);
std::string to_string(const GroundProblem &gp, const GroundConstraint &c,
                      const std::vector<std::string> &tags);

} // namespace htn

#endif
