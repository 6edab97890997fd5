#include "notcontains/cli.hpp"

int main(int argc, char** argv) { return notcontains::cli::run(argc, argv); }
