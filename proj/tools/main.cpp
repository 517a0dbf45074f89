#include <iostream>

#include "nracegar/cli.h"

int main(int argc, char ** argv) { return nracegar::run(argc, argv, std::cout, std::cerr); }
