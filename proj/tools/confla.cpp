#include <iostream>

#include "confla/cli.hpp"

int main(int argc, char** argv) { return confla::run_cli(argc, argv, std::cout, std::cerr); }
