#include <iostream>

#include "htype/cli.hpp"

int main(int argc, char** argv) { return htype::cli::run_cli(argc, argv, std::cout, std::cerr); }
