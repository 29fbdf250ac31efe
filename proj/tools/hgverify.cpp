#include "hgv/cli.hpp"

int main(int argc, char** argv) { return hgv::cli::run(argc, argv); }
