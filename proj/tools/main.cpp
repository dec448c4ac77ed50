#include "agora/cli.hpp"

int main(int argc, char** argv) { return agora::cli_main(argc, argv); }
