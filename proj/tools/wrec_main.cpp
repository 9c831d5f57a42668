#include <iostream>

#include "wrec/cli.hpp"

int main(int argc, char** argv) { return wrec::cli::run(argc, argv, std::cout, std::cerr); }
