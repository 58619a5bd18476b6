#include "cli.hpp"

int main(int argc, char** argv) { return decaylab::cli::run(argc, argv); }
