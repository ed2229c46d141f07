#include "epigrow/cli.hpp"

int main(int argc, char** argv) { return epigrow::cli_main(argc, argv); }
