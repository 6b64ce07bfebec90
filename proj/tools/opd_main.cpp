#include <iostream>

#include "opd/cli.hpp"

int main(int argc, char** argv) { return opd::cli_main(argc, argv, std::cout, std::cerr); }
