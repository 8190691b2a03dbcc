#include "phom/cli_app.hpp"

int main(int argc, char** argv) { return phom::run_cli(argc, argv); }
