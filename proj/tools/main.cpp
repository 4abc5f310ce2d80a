#include <string_spectra/cli.hpp>

int main(int argc, char** argv) { return string_spectra::cli::run(argc, argv); }
