#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace auctionlab::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool informational = false;
    double seconds = 0.0;
    std::string detail;
};

struct Options {
    std::vector<int> criteria;     // empty = all
    double tolerance_scale = 1.0;  // multiplies every tolerance and band
    std::uint64_t seed = 0xA0C710u;
};

/// Runs the acceptance suite and returns one result per criterion.
std::vector<CriterionResult> run(const Options& opt);

std::string format_report(const std::vector<CriterionResult>& results);

/// True iff every non-informational criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

} // namespace auctionlab::verify
