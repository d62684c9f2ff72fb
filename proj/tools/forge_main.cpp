#include <iostream>
#include <string>
#include <vector>

#include "forge/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return forge::run_cli(args, std::cout);
}
