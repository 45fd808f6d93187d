#include <iostream>

#include "modulecad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modulecad::run_cli(args, std::cout, std::cerr);
}
