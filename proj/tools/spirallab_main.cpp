#include "spirallab/cli.hpp"

int main(int argc, char** argv) { return spirallab::cli::run(argc, argv); }
