#include <iostream>

#include "qgkm/cli.hpp"

int main(int argc, char** argv) { return qgkm::run_cli(argc, argv, std::cout, std::cerr); }
