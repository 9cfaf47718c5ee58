#include <iostream>

#include "gridsink/cli.hpp"

int main(int argc, char** argv) { return gridsink::cli::run(argc, argv, std::cout, std::cerr); }
