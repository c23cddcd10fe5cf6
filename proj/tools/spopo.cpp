#include "spopo/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return spopo::run_cli(argc, argv, std::cout, std::cerr); }
