#include <iostream>

#include "seismo/cli/cli.hpp"

int main(int argc, char** argv) { return seismo::cli::run(argc, argv, std::cout, std::cerr); }
