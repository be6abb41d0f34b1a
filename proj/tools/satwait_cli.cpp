#include "satwait/cli.hpp"

int main(int argc, char** argv) { return satwait::cli::run_cli(argc, argv); }
