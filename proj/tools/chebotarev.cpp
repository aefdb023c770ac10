#include "cheb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cheb::cli::main_entry(argc, argv, std::cout, std::cerr);
}
