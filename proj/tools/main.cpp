#include "sievelab/cli.hpp"

int main(int argc, char** argv) { return sievelab::cli::run(argc, argv); }
