#include "hamcert/cli.hpp"

int main(int argc, char** argv) { return hamcert::run_cli(argc, argv); }
