#include <iostream>

#include "azuma/cli/app.hpp"

int main(int argc, char** argv) { return azuma::cli::run(argc, argv, std::cout, std::cerr); }
