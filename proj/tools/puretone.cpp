#include "puretone/cli.hpp"

int main(int argc, char** argv) { return puretone::cli::run(argc, argv); }
