#include "bolab/cli/run.hpp"

int main(int argc, char** argv) { return bolab::main_entry(argc, argv); }
