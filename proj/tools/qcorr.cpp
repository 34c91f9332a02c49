#include <iostream>

#include "qcorr/cli.hpp"

int main(int argc, char** argv) { return qcorr::cli::run(argc, argv, std::cout, std::cerr); }
