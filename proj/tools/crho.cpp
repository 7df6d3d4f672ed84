#include <iostream>
#include <string>
#include <vector>

#include "crho/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return crho::cli::run(args, std::cout, std::cerr);
}
