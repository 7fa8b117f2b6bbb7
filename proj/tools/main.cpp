#include "gwr/cli.hpp"

int main(int argc, char** argv) { return gwr::cli::run(argc, argv); }
