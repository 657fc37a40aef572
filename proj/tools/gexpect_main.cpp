#include "gexpect/cli.hpp"

int main(int argc, char** argv) { return gexpect::cli::main(argc, argv); }
