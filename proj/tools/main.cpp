#include "slackcert/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return slackcert::cli_main(argc, argv, std::cout, std::cerr); }
