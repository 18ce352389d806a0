#include <iostream>

#include "tcn/cli.hpp"

int main(int argc, char** argv) { return tcn::cli::run(argc, argv, std::cout, std::cerr); }
