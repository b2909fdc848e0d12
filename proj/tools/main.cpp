#include "cli.hpp"

int main(int argc, char** argv) { return conic_defense::cli::run_cli(argc, argv); }
