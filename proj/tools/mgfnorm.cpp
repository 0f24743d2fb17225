#include <iostream>

#include "mgfnorm/cli.hpp"

int main(int argc, char** argv) { return mgfnorm::cli::run(argc, argv, std::cout, std::cerr); }
