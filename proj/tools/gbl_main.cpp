#include "gbl/cli.hpp"

int main(int argc, char** argv) { return gbl::run_cli(argc, argv); }
