#include "mkldd/cli.hpp"

int main(int argc, char** argv) { return mkldd::run_cli(argc, argv); }
