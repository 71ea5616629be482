#include "benchcost/cli.hpp"

int main(int argc, char** argv) { return benchcost::cli_main(argc, argv); }
