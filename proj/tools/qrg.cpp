#include "qrg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qrg::main_entry(argc, argv, std::cout, std::cerr); }
