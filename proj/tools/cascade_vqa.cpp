#include <iostream>

#include "cascade_vqa/cli.hpp"

int main(int argc, char** argv) { return cvqa::cli::run(argc, argv, std::cout, std::cerr); }
