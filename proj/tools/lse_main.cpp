// SPDX-License-Identifier: Apache-2.0
#include "lse/cli.hpp"

int main(int argc, char** argv) { return lse::cli_main(argc, argv); }
