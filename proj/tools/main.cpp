#include "cli.hpp"

int main(int argc, char** argv) { return nlsdbar::cli::main_entry(argc, argv); }
