#include <iostream>

#include "copath/cli.hpp"

int main(int argc, char** argv) { return copath::run_cli(argc, argv, std::cout, std::cerr); }
