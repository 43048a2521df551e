#include "abelcode/cli.hpp"

int main(int argc, char** argv) { return abelcode::cli::run(argc, argv); }
