#include "commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return ermakov::cli::run(argc, argv, std::cout, std::cerr); }
