#include "cli.hpp"

int main(int argc, char** argv) {
    return riskdp::cli::run(argc, argv);
}
