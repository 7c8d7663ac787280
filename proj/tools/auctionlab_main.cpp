#include "auctionlab/config.hpp"

int main(int argc, char** argv) {
    return auctionlab::lab::run_cli(argc, argv);
}
