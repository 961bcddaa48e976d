#include "rfl/cli.hpp"

int main(int argc, char** argv) { return rfl::cli::run(argc, argv); }
