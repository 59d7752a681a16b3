#include "fgft/cli.hpp"

int main(int argc, char** argv) { return fgft::run_cli(argc, argv); }
