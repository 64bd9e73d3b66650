#include <iostream>

#include "qeq/cli.hpp"

int main(int argc, char** argv) { return qeq::run_cli(argc, argv, std::cout, std::cerr); }
