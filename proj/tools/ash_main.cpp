// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "ash/cli/cli.hpp"

int main(int argc, char** argv) {
    return ash::cli::run_cli(argc, argv, std::cout, std::cerr);
}
