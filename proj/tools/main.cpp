#include "infx/cli.hpp"

int main(int argc, char** argv) { return infx::cli_dispatch(argc, argv); }
