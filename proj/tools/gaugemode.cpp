#include "gaugemode/cli.hpp"

int main(int argc, char** argv) { return gaugemode::run(argc, argv); }
