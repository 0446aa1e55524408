#include <iostream>

#include "diqss/cli.hpp"

int main(int argc, char** argv) { return diqss::cli::run(argc, argv, std::cout, std::cerr); }
