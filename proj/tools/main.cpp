#include "commands.hpp"

int main(int argc, char **argv) { return compactknap::cli::run(argc, argv); }
