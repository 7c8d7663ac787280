#pragma once

#include "auctionlab/strategy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace auctionlab {

/// A welfare-benevolent seller's reserve choice against a bid distribution:
/// the smallest maximizer of b(1-F_B(b^-)); a flat plateau resolves to its
/// left edge.
struct ReserveDecision {
    double reserve_price = 0.0; // in bid space
    double reserve_value = 0.0; // beta^-1 of the price
    double attained_revenue = 0.0;
};

ReserveDecision optimal_reserve(const BidDistribution& bd);

/// ERM monopoly price of a finite bid sample: the smallest maximizer of
/// b_(i+1) * (1 - i/n) over i = 0..n-1 (i = 0 puts the reserve at the lowest
/// bid and captures every sale).
double erm_reserve(std::span<const double> bids);

/// One (n, trial) row of the ERM robustness experiment.
struct ErmReport {
    long n = 0;
    double eps = 0.0;     // eps_n used by the bidder
    double delta = 0.0;   // DKW confidence parameter
    double delta1 = 0.0;  // 1 if the eps > x_(n) C_n / F(r) condition failed
    double x_hat = 0.0;   // reserve value the seller reaches by ERM
    double x_max = 0.0;   // largest sampled value x_(n)
    double c_n = 0.0;     // n^{-1/2} sqrt(ln(2/delta)/2)
    double bound = 0.0;   // 2 r C_n / (eps gamma_F)
    bool hit = false;     // x_hat < bound
};

/// Samples trials x n values from d, bids through EpsThreshold(r, eps_n) with
/// eps_n = n^(-1/2+eta), runs ERM reserve selection and checks the
/// concentration bound per trial. With eps_zero_control the bidder uses
/// eps_n = 0 instead (the flat-plateau control arm).
std::vector<ErmReport> erm_theorem5_experiment(const Distribution& d, double r, double eta,
                                               std::span<const long> n_grid, double delta,
                                               int trials, std::uint64_t seed,
                                               bool eps_zero_control = false);

/// min f on [0,r] over a 10^4 grid, minus a 1e-12 safety margin.
double erm_gamma_lower_bound(const Distribution& d, double r);

} // namespace auctionlab
