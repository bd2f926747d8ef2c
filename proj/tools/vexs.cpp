#include <iostream>

#include "vexs/cli.hpp"

int main(int argc, char** argv) { return vexs::run_cli(argc, argv, std::cout, std::cerr); }
