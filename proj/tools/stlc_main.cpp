#include "stlc/cli.hpp"

int main(int argc, char** argv) { return stlc::cli::cli_main(argc, argv); }
