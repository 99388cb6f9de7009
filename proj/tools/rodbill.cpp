#include <iostream>

#include "rodbilliard/cli.hpp"

int main(int argc, char** argv) { return rodbilliard::run_cli(argc, argv, std::cout, std::cerr); }
