#pragma once

#include "auctionlab/distribution.hpp"

#include <string>
#include <utility>
#include <vector>

namespace auctionlab {

enum class Mechanism { Lazy, Myerson, Eager };

std::string mechanism_name(Mechanism m);

/// Utility of the single strategic bidder (K-1 symmetric truthful opponents)
/// under truthful play vs thresholding at the monopoly price, in the eps->0
/// limit of the threshold lift.
struct MechanismComparison {
    Mechanism mechanism;
    double u_truthful = 0.0;
    double u_threshold = 0.0;
    double uplift_abs = 0.0;
    double uplift_rel = 0.0;
};

std::pair<double, double> myerson_utilities(int k, const Distribution& f);
std::pair<double, double> lazy_utilities(int k, const Distribution& f);
std::pair<double, double> eager_utilities(int k, const Distribution& f);

/// Runs all three mechanisms and asserts the uplift-ordering lemmas
/// (Myerson >= Lazy and Eager >= Lazy). `thresholding = false` degenerates
/// the strategic bidder to truthful (all uplifts 0).
std::vector<MechanismComparison> compare_all(int k, const Distribution& f,
                                             bool thresholding = true);

} // namespace auctionlab
