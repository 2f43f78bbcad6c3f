#include "cli.hpp"

int main(int argc, char** argv) { return gxr::cli::run(argc, argv, std::cout, std::cerr); }
