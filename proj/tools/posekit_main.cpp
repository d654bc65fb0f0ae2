#include <iostream>

#include "posekit/cli.hpp"

int main(int argc, char** argv) { return posekit::cli_run(argc, argv, std::cout, std::cerr); }
