#include "cli.hpp"

int main(int argc, char** argv) { return volent::cli::main_entry(argc, argv); }
