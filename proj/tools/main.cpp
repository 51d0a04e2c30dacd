#include <iostream>

#include "brwbrw/cli.hpp"

int main(int argc, char** argv) { return brwbrw::cli::run(argc, argv, std::cout, std::cerr); }
