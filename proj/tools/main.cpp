#include "gendiff/cli.hpp"

int main(int argc, char** argv) { return gendiff::cli::main_entry(argc, argv); }
