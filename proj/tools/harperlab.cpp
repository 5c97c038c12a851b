#include "harperlab/cli.hpp"

int main(int argc, char** argv) { return harperlab::dispatch(argc, argv); }
