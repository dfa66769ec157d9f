#include "hpw/cli.hpp"

int main(int argc, char** argv) { return hpw::cli::run(argc, argv); }
