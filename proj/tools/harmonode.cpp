#include <iostream>

#include "harmonode/cli.hpp"

int main(int argc, char** argv) { return harmonode::cli::run(argc, argv, std::cout, std::cerr); }
