#include "auctionlab/seller.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace auctionlab {

namespace {
constexpr int kReserveGrid = 10000;
}

ReserveDecision optimal_reserve(const BidDistribution& bd) {
    const double a = bd.lo();
    const double b = bd.hi();
    std::vector<double> grid(kReserveGrid + 1), val(kReserveGrid + 1);
    for (int i = 0; i <= kReserveGrid; ++i) {
        grid[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / kReserveGrid;
        val[static_cast<std::size_t>(i)] = bd.revenue(grid[static_cast<std::size_t>(i)]);
    }
    const std::size_t j = static_cast<std::size_t>(
        std::max_element(val.begin(), val.end()) - val.begin());
    const double ga = grid[j == 0 ? 0 : j - 1];
    const double gb = grid[std::min(j + 1, grid.size() - 1)];
    auto rev = [&bd](double x) { return bd.revenue(x); };
    const double refined_arg = num::golden_max(rev, ga, gb, 1e-12);
    const double peak = std::max(bd.revenue(refined_arg), val[j]);
    const double eps = 1e-12 * std::max(1.0, peak);

    ReserveDecision out;
    if (bd.revenue(a) >= peak - eps) {
        out.reserve_price = a; // lowest bid already extracts the maximum
    } else {
        // Plateau detection: several consecutive grid cells at the peak.
        std::size_t first = j;
        while (first > 0 && val[first - 1] >= peak - eps) --first;
        if (j - first >= 2) {
            const double left = first == 0 ? a : grid[first - 1];
            out.reserve_price =
                num::bisect_predicate([&](double x) { return rev(x) >= peak - eps; }, left,
                                      grid[first], 1e-12);
        } else {
            out.reserve_price = refined_arg;
        }
    }
    out.reserve_value = bd.strategy().inverse_bid(out.reserve_price);
    out.attained_revenue = bd.revenue(out.reserve_price);
    return out;
}

double erm_reserve(std::span<const double> bids) {
    if (bids.empty()) throw EmptySample("erm_reserve: empty bid sample");
    std::vector<double> sorted(bids.begin(), bids.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rev = sorted[i] * static_cast<double>(n - i) / static_cast<double>(n);
        if (rev > best) {
            best = rev;
            best_i = i;
        }
    }
    return sorted[best_i];
}

double erm_gamma_lower_bound(const Distribution& d, double r) {
    const double a = d.lo();
    double gamma = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kReserveGrid; ++i) {
        const double x = a + (r - a) * static_cast<double>(i) / kReserveGrid;
        gamma = std::min(gamma, d.pdf(x));
    }
    return gamma - 1e-12;
}

namespace {

struct TrialOutcome {
    double x_hat;
    double x_max;
};

TrialOutcome run_erm_trial(const Distribution& d, const Strategy& s, long n,
                           const num::CounterRng& rng, std::uint64_t stream) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
        values[static_cast<std::size_t>(j)] =
            d.quantile(rng.u01(stream, static_cast<std::uint64_t>(j)));
    }
    std::sort(values.begin(), values.end());
    // The bid map is increasing, so scanning bids in value order gives the
    // order-statistic ERM argmax and the matching reserve value directly.
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double rev = s.bid(values[i]) * static_cast<double>(values.size() - i) /
                           static_cast<double>(values.size());
        if (rev > best) {
            best = rev;
            best_i = i;
        }
    }
    return {values[best_i], values.back()};
}

} // namespace

std::vector<ErmReport> erm_theorem5_experiment(const Distribution& d, double r, double eta,
                                               std::span<const long> n_grid, double delta,
                                               int trials, std::uint64_t seed,
                                               bool eps_zero_control) {
    if (n_grid.empty()) throw ConfigInvalid("erm experiment: empty n grid");
    if (trials < 1) throw ConfigInvalid("erm experiment: trials must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigInvalid("erm experiment: delta must be in (0,1)");
    const double gamma = erm_gamma_lower_bound(d, r);
    if (gamma <= 0.0) {
        throw AssumptionViolated("erm experiment: density not bounded away from 0 below r");
    }
    const double rev_r = d.revenue(r);
    for (int i = 0; i <= kReserveGrid; ++i) {
        const double t = r + (d.hi() - r) * static_cast<double>(i) / kReserveGrid;
        if (d.revenue(t) > rev_r + 1e-9 * std::max(1.0, rev_r)) {
            throw AssumptionViolated("erm experiment: revenue not maximized at r on [r, hi]");
        }
    }
    const double f_r = d.cdf(r);
    const num::CounterRng rng{seed};

    std::vector<ErmReport> reports;
    reports.reserve(n_grid.size() * static_cast<std::size_t>(trials));
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        const long n = n_grid[ni];
        if (n < 2) throw ConfigInvalid("erm experiment: n must be >= 2");
        const double eps_n = eps_zero_control ? 0.0 : std::pow(static_cast<double>(n), -0.5 + eta);
        const Strategy s = Strategy::eps_threshold(d, r, eps_n);
        const double c_n = std::sqrt(std::log(2.0 / delta) / 2.0) / std::sqrt(static_cast<double>(n));
        const double bound = eps_n > 0.0 ? 2.0 * r * c_n / (eps_n * gamma)
                                         : std::numeric_limits<double>::infinity();

        std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
        const unsigned workers =
            std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
        std::vector<std::future<void>> futs;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
                    const std::uint64_t stream = (static_cast<std::uint64_t>(ni) << 32) |
                                                 static_cast<std::uint64_t>(t);
                    outcomes[static_cast<std::size_t>(t)] = run_erm_trial(d, s, n, rng, stream);
                }
            }));
        }
        for (auto& f : futs) f.get();

        for (int t = 0; t < trials; ++t) {
            const auto& o = outcomes[static_cast<std::size_t>(t)];
            ErmReport rep;
            rep.n = n;
            rep.eps = eps_n;
            rep.delta = delta;
            rep.delta1 = (eps_n <= o.x_max * c_n / f_r) ? 1.0 : 0.0;
            rep.x_hat = o.x_hat;
            rep.x_max = o.x_max;
            rep.c_n = c_n;
            rep.bound = bound;
            rep.hit = o.x_hat < bound;
            reports.push_back(rep);
        }
    }
    return reports;
}

} // namespace auctionlab
