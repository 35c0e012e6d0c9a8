#include <iostream>

#include "mhlab/cli.hpp"

int main(int argc, char** argv)
{
    return mhlab::cli::run(argc, argv, std::cout, std::cerr);
}
