#include <iostream>

#include "skln_cli/cli.hpp"

int main(int argc, char** argv) {
    return skln::cli::run(argc, argv, std::cout, std::cerr);
}
