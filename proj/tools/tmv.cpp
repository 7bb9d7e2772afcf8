#include "tmv/cli.hpp"

int main(int argc, char** argv) { return tmv::run_cli(argc, argv); }
