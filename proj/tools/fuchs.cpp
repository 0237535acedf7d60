#include <iostream>

#include "fuchs/cli.hpp"

int main(int argc, char** argv) { return fuchs::cli::run(argc, argv, std::cout, std::cerr); }
