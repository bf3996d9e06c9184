#include "zklb/cli.hpp"

int main(int argc, char** argv) { return zklb::run_cli(argc, argv); }
