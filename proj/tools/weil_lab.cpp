#include "cli.hpp"

int main(int argc, char** argv) { return weil::cli::run_cli(argc, argv); }
