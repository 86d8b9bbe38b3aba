#include <iostream>

#include "twinbeam/cli.hpp"

int main(int argc, char** argv) { return twinbeam::run_cli(argc, argv, std::cout, std::cerr); }
