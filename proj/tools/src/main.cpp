#include <iostream>

#include "fatou/cli.hpp"

int main(int argc, char** argv) { return fatou::run_cli(argc, argv, std::cout, std::cerr); }
