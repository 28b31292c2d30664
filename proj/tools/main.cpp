#include "calipers/cli.hpp"

int main(int argc, char** argv) { return calipers::cli_main(argc, argv); }
