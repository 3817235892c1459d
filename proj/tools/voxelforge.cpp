#include "voxelforge/cli.hpp"

int main(int argc, char** argv) { return voxelforge::cli::run(argc, argv); }
