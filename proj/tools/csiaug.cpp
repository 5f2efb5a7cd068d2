#include "csiaug/cli.hpp"

int main(int argc, char** argv) { return csiaug::cli::run(argc, argv); }
