#include "commands.hpp"

int main(int argc, char** argv) { return minigraph::cli::run(argc, argv); }
