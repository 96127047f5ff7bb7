#include <iostream>

#include "finmem/cli.hpp"

int main(int argc, char** argv) {
    return finmem::cli::run(argc, argv, std::cout, std::cerr);
}
