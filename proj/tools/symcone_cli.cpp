#include "symcone/cli.hpp"

int main(int argc, char** argv) { return symcone::cli::run(argc, argv); }
