#include <iostream>

#include "ruledrel/cli/app.hpp"

int main(int argc, char** argv) { return ruledrel::cli::run(argc, argv, std::cout, std::cerr); }
