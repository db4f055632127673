#ifndef HTN_GROUNDER_H
#define HTN_GROUNDER_H

#include "htn/domain.h"
#include "htn/ground_actions.h"
#include "htn/ground_methods.h"
#include "htn/ground_model.h"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace htn {

struct GroundingReport {
    InertiaReport inertia;
    std::vector<OperatorStats> operators;
    std::vector<MethodStats> methods;
    int fixpoint_iterations = 0;
    // Propositions left in the table, per predicate (zero when compiled away).
    std::map<std::string, std::size_t> atoms;

    std::uint64_t actions_before() const;
    std::uint64_t actions_after() const;
    std::uint64_t methods_before() const;
    std::uint64_t methods_after() const;

    std::string to_string() const;
};

struct GroundingResult {
    GroundProblem problem;
    GroundingReport report;
};

/*
  Operators first (normalize, inertia, instantiate, simplify), then methods
  (normalize, infer types, instantiate, simplify by constraints, simplify by
  tasks), then the goal network. The proposition table is frozen on return.
*/
GroundingResult ground(const Problem &problem, const GroundingOptions &options = {});

// Estimated instance count of every operator and method schema, in domain
// order, without enumerating. Free method variables are typed first.
std::vector<std::pair<std::string, std::uint64_t>> estimate_schemas(const Domain &domain);

} // namespace htn

#endif
