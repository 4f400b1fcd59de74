#include "orbitrad/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return orbitrad::cli_main(argc, argv, std::cout, std::cerr); }
