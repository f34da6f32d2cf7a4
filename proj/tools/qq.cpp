#include "qq/cli.hpp"

int main(int argc, char **argv) { return qq::cli::main(argc, argv); }
