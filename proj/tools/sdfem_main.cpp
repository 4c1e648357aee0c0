#include <iostream>

#include "sdfem/cli.hpp"

int main(int argc, char** argv) { return sdfem::run_cli(argc, argv, std::cout, std::cerr); }
