#include "gna/cli.hpp"

int main(int argc, char** argv) {
    return gna::run_cli(argc, argv);
}
