#include "supmsvm/cli.hpp"

int main(int argc, char** argv) {
    return supmsvm::run_cli(argc, argv);
}
