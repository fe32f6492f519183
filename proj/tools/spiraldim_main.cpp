#include "spiraldim/cli.hpp"

int main(int argc, char** argv) { return spiraldim::run_cli(argc, argv); }
