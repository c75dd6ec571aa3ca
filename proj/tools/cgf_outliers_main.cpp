#include "cgf_outliers/cli.hpp"

int main(int argc, char** argv) { return cgf_outliers::run_cli(argc, argv); }
