#include "ikka/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ikka::cli::run(argc, argv, std::cout, std::cerr); }
