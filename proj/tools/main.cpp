#include <iostream>

#include "logsurf/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return logsurf::cli::run(args, std::cout, std::cerr);
}
