#include "bmcap/cli.hpp"

int main(int argc, char** argv) { return bmcap::run_cli(argc, argv); }
