#include "gale/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gale::run_cli(argc, argv, std::cout, std::cerr); }
