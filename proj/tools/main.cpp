#include "specden/cli.hpp"

int main(int argc, char** argv) { return specden::run_cli(argc, argv); }
