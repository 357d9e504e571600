#include "mulfs/cli.hpp"

int main(int argc, char** argv) { return mulfs::cli::run(argc, argv); }
