#include <iostream>

#include "herodraft/cli.hpp"

int main(int argc, char** argv) { return herodraft::cli::dispatch(argc, argv, std::cout, std::cerr); }
