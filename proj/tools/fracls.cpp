#include <iostream>

#include "fracls/cli.hpp"

int main(int argc, char** argv) { return fracls::cli::run(argc, argv, std::cout, std::cerr); }
