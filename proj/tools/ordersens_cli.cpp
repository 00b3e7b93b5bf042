#include <iostream>

#include "ordersens/cli.hpp"

int main(int argc, char** argv) { return ordersens::cli::run(argc, argv, std::cout, std::cerr); }
