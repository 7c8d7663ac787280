#include "auctionlab/oracle.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"
#include "auctionlab/seller.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace auctionlab {

namespace {

constexpr std::uint64_t kReserveStream = 0; // bidder value streams start at 1
constexpr int kBatches = 100;

struct Accum {
    double utility = 0.0;
    double payment = 0.0;
    double gross = 0.0;
    long wins = 0;
};

// Smallest value z at which the bidder's virtual bid reaches v; the Myerson
// threshold payment is her bid at z (approached from the winning side).
double myerson_threshold_payment(const Strategy& s, double vstar) {
    const Distribution& f = s.base();
    const double lo = f.lo();
    switch (s.kind()) {
    case StrategyKind::Truthful:
        return f.psi_inverse(vstar);
    case StrategyKind::EpsThreshold:
        if (vstar <= s.eps()) return s.bid(lo);
        return std::max(s.r(), f.psi_inverse(vstar));
    case StrategyKind::DoubleThreshold: {
        if (s.x0() >= s.x1()) return f.psi_inverse(vstar); // degenerate truthful
        if (vstar <= 0.0) {
            const double z = f.psi_inverse(vstar);
            if (z <= s.x0()) return z; // truthful branch below x0 already clears
            // Winning bids resume on the plateau branch just above x0.
            return s.plateau_revenue() / (1.0 - f.cdf(s.x0()));
        }
        return std::max(s.x1(), f.psi_inverse(vstar));
    }
    }
    return f.psi_inverse(vstar);
}

void validate(const SimConfig& c) {
    if (c.n_auctions < 1) throw ConfigInvalid("simulate: n_auctions must be >= 1");
    if (c.strategies.empty()) throw ConfigInvalid("simulate: need at least one bidder");
    if (c.reserve_rule.kind == ReserveRule::Kind::FixedPrice && c.reserve_rule.price < 0.0) {
        throw ConfigInvalid("simulate: negative fixed reserve");
    }
}

std::vector<double> resolve_reserves(const SimConfig& c) {
    std::vector<double> reserves(c.strategies.size(), 0.0);
    switch (c.reserve_rule.kind) {
    case ReserveRule::Kind::FixedPrice:
        std::fill(reserves.begin(), reserves.end(), c.reserve_rule.price);
        break;
    case ReserveRule::Kind::MonopolyOfBids:
    case ReserveRule::Kind::MonopolyOfValues:
        for (std::size_t i = 0; i < c.strategies.size(); ++i) {
            reserves[i] = optimal_reserve(pushforward(c.strategies[i])).reserve_price;
        }
        break;
    }
    return reserves;
}

struct RunOutput {
    // [batch][bidder]
    std::vector<std::vector<Accum>> batch_accums;
    // Optional per-bidder bid log (stage-1 sample for ERM), indexed by auction.
    std::vector<std::vector<double>> bid_log;
};

RunOutput run_auctions(const SimConfig& c, const std::vector<double>& reserves,
                       std::uint64_t index_offset, bool log_bids) {
    const std::size_t nb = c.strategies.size();
    const long n = c.n_auctions;
    const int batches = static_cast<int>(std::min<long>(kBatches, n));
    const num::CounterRng rng{c.seed};

    RunOutput out;
    out.batch_accums.assign(static_cast<std::size_t>(batches), std::vector<Accum>(nb));
    if (log_bids) out.bid_log.assign(nb, std::vector<double>(static_cast<std::size_t>(n)));

    auto run_batch = [&](int bi) {
        const long a0 = n * bi / batches;
        const long a1 = n * (bi + 1) / batches;
        auto& acc = out.batch_accums[static_cast<std::size_t>(bi)];
        std::vector<double> values(nb), bids(nb), virt(nb);
        for (long a = a0; a < a1; ++a) {
            const std::uint64_t idx = index_offset + static_cast<std::uint64_t>(a);
            double floor_reserve = 0.0;
            if (c.phase1_reserve) {
                floor_reserve = c.phase1_reserve->quantile(rng.u01(kReserveStream, idx));
            }
            for (std::size_t i = 0; i < nb; ++i) {
                values[i] = c.strategies[i].base().quantile(rng.u01(i + 1, idx));
                bids[i] = c.strategies[i].bid(values[i]);
                if (log_bids) out.bid_log[i][static_cast<std::size_t>(a)] = bids[i];
            }

            std::size_t winner = nb;
            double payment = 0.0;
            switch (c.mechanism) {
            case SimMechanism::LazySecondPrice: {
                std::size_t top = 0;
                for (std::size_t i = 1; i < nb; ++i) {
                    if (bids[i] > bids[top]) top = i;
                }
                const double own = std::max(reserves[top], floor_reserve);
                if (bids[top] >= own) {
                    winner = top;
                    double second = -std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < nb; ++i) {
                        if (i != top) second = std::max(second, bids[i]);
                    }
                    payment = nb > 1 ? std::max(second, own) : own;
                }
                break;
            }
            case SimMechanism::Eager: {
                std::size_t top = nb;
                for (std::size_t i = 0; i < nb; ++i) {
                    if (bids[i] >= std::max(reserves[i], floor_reserve) &&
                        (top == nb || bids[i] > bids[top])) {
                        top = i;
                    }
                }
                if (top != nb) {
                    winner = top;
                    double second = -std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < nb; ++i) {
                        if (i != top && bids[i] >= std::max(reserves[i], floor_reserve)) {
                            second = std::max(second, bids[i]);
                        }
                    }
                    payment = std::max(second, std::max(reserves[top], floor_reserve));
                }
                break;
            }
            case SimMechanism::Myerson: {
                for (std::size_t i = 0; i < nb; ++i) {
                    virt[i] = c.strategies[i].bid_virtual_value(values[i]);
                }
                std::size_t top = 0;
                for (std::size_t i = 1; i < nb; ++i) {
                    if (virt[i] > virt[top]) top = i;
                }
                if (virt[top] >= 0.0) {
                    winner = top;
                    double vstar = 0.0;
                    for (std::size_t i = 0; i < nb; ++i) {
                        if (i != top) vstar = std::max(vstar, virt[i]);
                    }
                    payment = myerson_threshold_payment(c.strategies[top], vstar);
                }
                break;
            }
            }

            if (winner != nb) {
                acc[winner].utility += values[winner] - payment;
                acc[winner].payment += payment;
                acc[winner].gross += values[winner];
                acc[winner].wins += 1;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    if (workers == 1 || batches == 1) {
        for (int bi = 0; bi < batches; ++bi) run_batch(bi);
    } else {
        std::atomic<int> next{0};
        std::vector<std::future<void>> futs;
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (int bi = next.fetch_add(1); bi < batches; bi = next.fetch_add(1)) {
                    run_batch(bi);
                }
            }));
        }
        for (auto& f : futs) f.get();
    }
    return out;
}

SimResult reduce_stats(const SimConfig& c, const RunOutput& run, const std::vector<double>& reserves) {
    const std::size_t nb = c.strategies.size();
    const long n = c.n_auctions;
    const int batches = static_cast<int>(run.batch_accums.size());
    SimResult res;
    res.n_auctions = n;
    res.bidders.resize(nb);
    std::vector<double> util_means(static_cast<std::size_t>(batches));
    std::vector<double> pay_means(static_cast<std::size_t>(batches));
    for (std::size_t i = 0; i < nb; ++i) {
        double utility = 0.0, payment = 0.0, gross = 0.0;
        long wins = 0;
        for (int bi = 0; bi < batches; ++bi) {
            const long a0 = n * bi / batches;
            const long a1 = n * (bi + 1) / batches;
            const Accum& a = run.batch_accums[static_cast<std::size_t>(bi)][i];
            utility += a.utility;
            payment += a.payment;
            gross += a.gross;
            wins += a.wins;
            util_means[static_cast<std::size_t>(bi)] = a.utility / static_cast<double>(a1 - a0);
            pay_means[static_cast<std::size_t>(bi)] = a.payment / static_cast<double>(a1 - a0);
        }
        BidderStats& s = res.bidders[i];
        const double dn = static_cast<double>(n);
        s.mean_utility = utility / dn;
        s.mean_payment = payment / dn;
        s.mean_gross = gross / dn;
        s.win_rate = static_cast<double>(wins) / dn;
        s.se_utility = num::batch_stats(util_means).se;
        s.se_payment = num::batch_stats(pay_means).se;
        s.reserve_price = reserves[i];
    }
    return res;
}

} // namespace

SimResult simulate(const SimConfig& c) {
    validate(c);
    const std::vector<double> reserves = resolve_reserves(c);
    const RunOutput run = run_auctions(c, reserves, 0, false);
    return reduce_stats(c, run, reserves);
}

TwoStageResult simulate_two_stage(const SimConfig& c, double alpha) {
    validate(c);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigInvalid("simulate_two_stage: alpha in [0,1]");
    const std::size_t nb = c.strategies.size();

    // Stage 1: no rule reserve, only the optional random reserve law.
    SimConfig stage1 = c;
    stage1.reserve_rule = {ReserveRule::Kind::FixedPrice, 0.0};
    const bool need_bids = c.reserve_rule.kind == ReserveRule::Kind::MonopolyOfBids;
    const std::vector<double> zero_reserves(nb, 0.0);
    const RunOutput run1 = run_auctions(stage1, zero_reserves, 0, need_bids);

    TwoStageResult out;
    out.alpha = alpha;
    out.phase1 = reduce_stats(stage1, run1, zero_reserves);

    std::vector<double> reserves2(nb, 0.0);
    switch (c.reserve_rule.kind) {
    case ReserveRule::Kind::FixedPrice:
        std::fill(reserves2.begin(), reserves2.end(), c.reserve_rule.price);
        break;
    case ReserveRule::Kind::MonopolyOfBids:
        for (std::size_t i = 0; i < nb; ++i) reserves2[i] = erm_reserve(run1.bid_log[i]);
        break;
    case ReserveRule::Kind::MonopolyOfValues:
        for (std::size_t i = 0; i < nb; ++i) {
            reserves2[i] = optimal_reserve(pushforward(c.strategies[i])).reserve_price;
        }
        break;
    }
    out.learned_reserves = reserves2;

    SimConfig stage2 = c;
    stage2.phase1_reserve.reset();
    const RunOutput run2 =
        run_auctions(stage2, reserves2, static_cast<std::uint64_t>(c.n_auctions), false);
    out.phase2 = reduce_stats(stage2, run2, reserves2);

    out.combined_utility.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        out.combined_utility[i] = alpha * out.phase1.bidders[i].mean_utility +
                                  (1.0 - alpha) * out.phase2.bidders[i].mean_utility;
    }
    return out;
}

} // namespace auctionlab
