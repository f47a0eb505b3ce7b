#include "bmshift/cli.hpp"

int main(int argc, char** argv) { return bmshift::cli_main(argc, argv); }
