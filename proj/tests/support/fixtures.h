#ifndef HTN_TESTS_FIXTURES_H
#define HTN_TESTS_FIXTURES_H

#include "htn/domain.h"
#include "htn/grounder.h"
#include "htn/parser.h"

#include <string>

namespace htn::testing {

inline std::string data_path(const std::string &relative) {
    return std::string(HTN_DATA_DIR) + "/" + relative;
}

inline const Domain &rover_domain() {
    static const Domain d = load_domain(data_path("rover/domain.pddl"));
    return d;
}

inline const Problem &fig1_problem() {
    static const Problem p = load_problem(data_path("rover/fig1.pddl"), rover_domain());
    return p;
}

inline const GroundingResult &fig1_ground() {
    static const GroundingResult g = ground(fig1_problem());
    return g;
}

} // namespace htn::testing

#endif
