#include <iostream>

#include "focinet/cli.hpp"

int main(int argc, char** argv) { return focinet::run(argc, argv, std::cout, std::cerr); }
