#include "tangle/commands.hpp"

int main(int argc, char** argv) { return tangle::run_cli(argc, argv); }
