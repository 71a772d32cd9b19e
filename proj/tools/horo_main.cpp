#include "horo/cli.hpp"

int main(int argc, char** argv) { return horo::cli_main(argc, argv); }
