#include <iostream>

#include "nsqht/bench.hpp"

int main(int argc, char** argv) { return nsqht::bench::run(argc, argv, std::cout, std::cerr); }
