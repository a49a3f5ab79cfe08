#include "thickthin/cli.hpp"

int main(int argc, char** argv) { return thickthin::run_cli(argc, argv); }
