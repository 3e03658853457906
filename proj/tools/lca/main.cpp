#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char *argv[]) {
    std::vector<std::string> args(argv, argv + argc);
    return lca::cli::run(args, std::cout, std::cerr);
}
