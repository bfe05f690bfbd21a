#include "czbmo/cli.hpp"

int main(int argc, char** argv) { return czbmo::run_cli(argc, argv); }
