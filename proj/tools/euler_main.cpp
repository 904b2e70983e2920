#include "euler/cli.hpp"

int main(int argc, char** argv) { return euler::run(argc, argv); }
