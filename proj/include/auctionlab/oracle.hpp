#pragma once

#include "auctionlab/strategy.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace auctionlab {

enum class SimMechanism { LazySecondPrice, Eager, Myerson };

/// How the seller sets per-bidder reserve prices.
///  - FixedPrice: the given price for every bidder.
///  - MonopolyOfBids: reserve estimated from observed bids; in the two-stage
///    simulation this is the ERM reserve over the bidder's stage-1 sample,
///    in the one-stage simulation its infinite-sample limit (the population
///    bid-distribution monopoly price).
///  - MonopolyOfValues: the population rule; the seller knows each bidder's
///    value law and strategy exactly and reserves at the monopoly price of
///    the induced bid distribution.
struct ReserveRule {
    enum class Kind { FixedPrice, MonopolyOfBids, MonopolyOfValues };
    Kind kind = Kind::FixedPrice;
    double price = 0.0;
};

struct SimConfig {
    long n_auctions = 0;
    std::uint64_t seed = 0;
    SimMechanism mechanism = SimMechanism::LazySecondPrice;
    std::vector<Strategy> strategies; // one per bidder
    std::optional<Distribution> phase1_reserve; // random reserve law H
    ReserveRule reserve_rule;
};

struct BidderStats {
    double mean_utility = 0.0;
    double se_utility = 0.0;
    double mean_payment = 0.0;
    double se_payment = 0.0;
    double win_rate = 0.0;
    double mean_gross = 0.0; // E[value * win]; equals utility + payment
    double reserve_price = 0.0;
};

struct SimResult {
    std::vector<BidderStats> bidders;
    long n_auctions = 0;
};

/// One-stage simulation: draws values per bidder per auction, maps them to
/// bids, applies the mechanism, and accumulates per-bidder statistics.
/// Deterministic given (config, seed) regardless of thread count; standard
/// errors come from 100 batch means. Ties break toward the lowest bidder
/// index. A configured phase1_reserve adds a shared random reserve floor
/// drawn once per auction.
SimResult simulate(const SimConfig& c);

struct TwoStageResult {
    SimResult phase1;
    SimResult phase2;
    double alpha = 0.0;
    std::vector<double> combined_utility; // alpha*U1 + (1-alpha)*U2 per bidder
    std::vector<double> learned_reserves; // phase-2 reserve prices per bidder
};

/// Exploration stage under the random reserve, then an exploitation stage
/// whose reserves follow the reserve rule (MonopolyOfBids = ERM over each
/// bidder's observed stage-1 bids).
TwoStageResult simulate_two_stage(const SimConfig& c, double alpha);

} // namespace auctionlab
