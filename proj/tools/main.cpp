#include "cli.hpp"

int main(int argc, char** argv) { return speccode::cli::main_entry(argc, argv); }
