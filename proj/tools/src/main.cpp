#include "commands.hpp"

int main(int argc, char** argv) { return hyperquad::cli::run(argc, argv); }
