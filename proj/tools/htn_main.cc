#include "htn/cli.h"

#include <iostream>

#ifndef HTN_DATA_DIR
#define HTN_DATA_DIR "data"
#endif

int main(int argc, char **argv) {
    return htn::run_cli(argc, argv, std::cout, std::cerr, HTN_DATA_DIR);
}
