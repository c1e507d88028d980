#include "uconvex/cli.hpp"

int main(int argc, char** argv) { return uconvex::cli_main(argc, argv); }
