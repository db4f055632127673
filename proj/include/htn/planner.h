#ifndef HTN_PLANNER_H
#define HTN_PLANNER_H

#include "htn/domain.h"
#include "htn/ground_model.h"

#include <cstdint>
#include <string>
#include <vector>

namespace htn {

struct SearchLimits {
    double timeout_seconds = 600.0;
    // Maximum number of open decompositions on the current branch.
    std::uint64_t max_depth = 1000000;
    // Prune a decomposition that repeats (state, pending tasks) of an
    // ancestor on the current branch.
    bool loop_check = true;
};

enum class SearchStatus { Solved, Failure, Timeout, DepthExceeded };

const char *to_string(SearchStatus status);

struct SearchStats {
    std::uint64_t nodes_expanded = 0; // actions applied + methods applied
    std::uint64_t backtracks = 0;
    std::uint64_t max_depth = 0;
    std::uint64_t loops_pruned = 0;
    double search_ms = 0.0;
};

struct SearchResult {
    SearchStatus status = SearchStatus::Failure;
    Plan plan;
    DecompositionTrace trace;
    SearchStats stats;
};

/*
  Depth-first forward decomposition over a ground problem. The first pending
  task is always refined; methods are tried in relevance order with
  chronological backtracking and their subtasks are put in front of the
  remaining tasks. A complete decomposition is accepted once the goal state
  and the residual constraints hold.
*/
SearchResult solve_ishop(const GroundProblem &gp, const SearchLimits &limits = {});

struct LiftedResult {
    SearchStatus status = SearchStatus::Failure;
    // "(name a b)" per action.
    std::vector<std::string> plan;
    SearchStats stats;
};

/*
  The same search on the lifted problem: operators and methods are bound
  against the pending task on the fly and free method variables are
  enumerated in the order the grounder uses, so both searches meet the
  candidates in the same order.
*/
LiftedResult solve_shop_lifted(const Problem &problem, const SearchLimits &limits = {});

} // namespace htn

#endif
