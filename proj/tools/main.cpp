#include <iostream>

#include "renyi_ldp/cli.hpp"

int main(int argc, char** argv) { return rldp::run(argc, argv, std::cout, std::cerr); }
