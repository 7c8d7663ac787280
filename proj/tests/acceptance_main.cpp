#include "auctionlab/verify.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    auctionlab::verify::Options opt;
    if (const char* env = std::getenv("AUCTIONLAB_SEED")) {
        opt.seed = std::strtoull(env, nullptr, 10);
    }
    for (int i = 1; i < argc; ++i) {
        opt.criteria.push_back(std::atoi(argv[i]));
    }
    const auto results = auctionlab::verify::run(opt);
    std::fputs(auctionlab::verify::format_report(results).c_str(), stdout);
    return auctionlab::verify::all_passed(results) ? 0 : 4;
}
