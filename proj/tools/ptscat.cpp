#include <iostream>

#include "ptscat/cli.hpp"

int main(int argc, char** argv) { return ptscat::run_command(argc, argv, std::cout, std::cerr); }
