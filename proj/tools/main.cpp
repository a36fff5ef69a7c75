#include "levershap/cli.hpp"

int main(int argc, char** argv) { return levershap::run_cli(argc, argv); }
