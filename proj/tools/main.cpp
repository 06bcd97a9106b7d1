#include "saedge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return saedge::cli_main(argc, argv, std::cout, std::cerr);
}
