#include "commands.hpp"

int main(int argc, char** argv) { return parabgmt::cli::run(argc, argv); }
