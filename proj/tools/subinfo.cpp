#include <iostream>
#include <string>
#include <vector>

#include "subinfo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return subinfo::cli::run(args, std::cout, std::cerr);
}
