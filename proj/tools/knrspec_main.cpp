#include "knrspec/cli.hpp"

int main(int argc, char** argv) { return knrspec::cli_main(argc, argv); }
