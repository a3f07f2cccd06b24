#include <iostream>
#include <string>
#include <vector>

#include "chanqed/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return chanqed::cli::run(args, std::cout, std::cerr);
}
