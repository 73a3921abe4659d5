#include "cli.hpp"

int main(int argc, char** argv) { return moment_spectra::cli::run(argc, argv); }
