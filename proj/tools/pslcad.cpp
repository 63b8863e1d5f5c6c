#include <iostream>

#include "psl/cli.hpp"

int main(int argc, char** argv) { return psl::run_cli(argc, argv, std::cout, std::cerr); }
