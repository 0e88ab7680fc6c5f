#include <iostream>

#include "plateful/cli.hpp"

int main(int argc, char** argv)
{
    return plateful::run_cli(argc, argv, std::cout, std::cerr);
}
