// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "stalloc/cli.hpp"

int main(int argc, char** argv) {
  return stalloc::cli::run_main(argc, argv, std::cout, std::cerr);
}
