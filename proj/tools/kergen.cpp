#include "kergen/cli.hpp"

int main(int argc, char** argv) { return kergen::cli::main_entry(argc, argv); }
