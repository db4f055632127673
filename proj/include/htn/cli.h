#ifndef HTN_CLI_H
#define HTN_CLI_H

#include <iosfwd>
#include <string>

namespace htn {

/*
  Entry point of the htn tool. Subcommands: ground, solve, validate, bench,
  estimate. Returns the process exit code: 0 solved (or valid), 1
  unsolvable (or invalid), 2 timeout, 3 input error. `data_dir` is where
  the bench looks for the family domains unless --data-dir is given.
*/
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err,
            const std::string &data_dir = "data");

} // namespace htn

#endif
