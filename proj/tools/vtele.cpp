#include "vtel/cli.hpp"

int main(int argc, char** argv) { return vtel::run_cli(argc, argv); }
