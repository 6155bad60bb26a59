#include <iostream>

#include "ndual/cli.hpp"

int main(int argc, char** argv) { return ndual::cli_main(argc, argv, std::cout, std::cerr); }
