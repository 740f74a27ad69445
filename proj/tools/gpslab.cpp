#include "gpslab/cli.hpp"

int main(int argc, char** argv) { return gpslab::cli::main(argc, argv); }
