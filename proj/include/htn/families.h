#ifndef HTN_FAMILIES_H
#define HTN_FAMILIES_H

#include <string>
#include <vector>

namespace htn {

// Generated problem families over the bundled desk domains.
// Names: "rover", "childsnack", "satellite".
const std::vector<std::string> &family_names();

// Domain file of a family, relative to the data directory.
std::string family_domain_path(const std::string &family);

/*
  Problem text of size `size` (>= 1). Sizes grow the object counts linearly;
  rover of size n has 4n waypoints. Unknown families raise Error.
*/
std::string generate_family_problem(const std::string &family, int size);

} // namespace htn

#endif
