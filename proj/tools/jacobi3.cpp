#include <iostream>
#include <string>
#include <vector>

#include "jacobi3/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return jacobi3::cli::run(args, std::cout, std::cerr);
}
