#include "vantage/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vantage::cli::run(argc, argv, std::cout, std::cerr); }
