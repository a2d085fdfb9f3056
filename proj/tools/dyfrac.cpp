#include <iostream>
#include <string>
#include <vector>

#include "dyfrac/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return dyfrac::run_cli(args, std::cout, std::cerr);
}
