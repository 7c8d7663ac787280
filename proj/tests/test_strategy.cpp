#include <doctest.h>

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"
#include "auctionlab/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace auctionlab;

namespace {
Distribution u01() {
    return Distribution::uniform(0.0, 1.0);
}
} // namespace

TEST_CASE("bid maps per kind") {
    const Strategy dt = Strategy::double_threshold(u01(), 0.0, 0.75);
    CHECK(std::fabs(dt.bid(0.0) - 0.1875) < 1e-15);
    CHECK(std::fabs(dt.bid(0.75) - 0.75) < 1e-12); // continuous at x1
    CHECK(std::fabs(dt.bid(0.9) - 0.9) < 1e-15);

    const Strategy tr = Strategy::truthful(u01());
    CHECK(tr.bid(0.42) == 0.42);

    const Strategy et = Strategy::eps_threshold(u01(), 0.5, 0.01);
    CHECK(std::fabs(et.bid(0.25) - (0.49 * 0.5 / 0.75 + 0.01)) < 1e-12);
    CHECK(std::fabs(et.bid(0.5) - 0.5) < 1e-12);
    CHECK(et.bid(0.7) == 0.7);

    CHECK_THROWS_AS(tr.bid(1.5), OutOfSupport);
}

TEST_CASE("bid virtual values flatten the shading region") {
    const Strategy dt = Strategy::double_threshold(u01(), 0.0, 0.75);
    CHECK(dt.bid_virtual_value(0.3) == 0.0);
    const Strategy et = Strategy::eps_threshold(u01(), 0.5, 0.02);
    CHECK(et.bid_virtual_value(0.1) == 0.02);
    const Strategy tr = Strategy::truthful(u01());
    CHECK(std::fabs(tr.bid_virtual_value(0.8) - 0.6) < 1e-12);
    // Left limits at the thresholds.
    CHECK(dt.bid_virtual_value(0.75) == 0.0);
    CHECK(et.bid_virtual_value(0.5) == 0.02);
}

TEST_CASE("perceived virtual value under a misestimated law") {
    const Strategy tr = Strategy::truthful(u01());
    const Distribution alt = Distribution::uniform(0.0, 1.1);
    CHECK(std::fabs(tr.perceived_virtual_value(alt, 0.5) - (-0.1)) < 1e-12);
    // Cross-check against the direct psi of the alternative law.
    CHECK(std::fabs(tr.perceived_virtual_value(alt, 0.5) - alt.psi(0.5)) < 1e-12);

    const Strategy et = Strategy::eps_threshold(u01(), 0.5, 0.01);
    for (double x : {0.1, 0.3, 0.49}) {
        CHECK(std::fabs(et.perceived_virtual_value(u01(), x) - et.bid_virtual_value(x)) < 1e-12);
    }
}

TEST_CASE("eps lift keeps the perceived virtual value above the corollary bound") {
    // Instance where the premises hold: threshold at the monopoly price.
    const double r = 0.5;
    const double eps = 0.02;
    const Strategy et = Strategy::eps_threshold(u01(), r, eps);
    for (double scale : {1.02, 1.05, 1.1}) {
        const Distribution alt = Distribution::uniform(0.0, scale);
        // sup |psi_F - psi_G| over (0,1) for two uniforms: scale - 1.
        const double delta = scale - 1.0;
        const double bound = eps - delta * std::max(r - eps, 1.0);
        for (int i = 1; i < 100; ++i) {
            const double x = i / 100.0;
            if (x > r) continue; // the lift only covers the shading region
            CHECK(et.perceived_virtual_value(alt, x) >= bound - 1e-12);
        }
    }
}

TEST_CASE("pushforward cdf has the closed plateau form") {
    const Strategy tr = Strategy::truthful(u01());
    const BidDistribution bt = pushforward(tr);
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        CHECK(std::fabs(bt.cdf(x) - x) < 1e-12);
    }

    const Strategy dt = Strategy::double_threshold(u01(), 0.0, 0.75);
    const BidDistribution bd = pushforward(dt);
    for (double b : {0.2, 0.3, 0.5, 0.7, 0.75}) {
        CHECK(std::fabs(bd.cdf(b) - (1.0 - 0.1875 / b)) < 1e-12);
    }
    // Seller revenue is globally maximized at the lowest bid.
    double best = -1.0, arg = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double b = bd.lo() + (bd.hi() - bd.lo()) * i / 2000.0;
        if (bd.revenue(b) > best) {
            best = bd.revenue(b);
            arg = b;
        }
    }
    CHECK(std::fabs(arg - 0.1875) < 1e-3);
    CHECK(std::fabs(best - 0.1875) < 1e-9);
}

TEST_CASE("pushforward identity and revenue plateau") {
    const num::CounterRng rng{11};
    const std::vector<Strategy> strategies = {
        Strategy::double_threshold(u01(), 0.0, 0.75),
        Strategy::double_threshold(u01(), 0.2, 0.8),
        Strategy::eps_threshold(u01(), 0.5, 0.01),
        Strategy::eps_threshold(Distribution::truncated_lognormal(0.0, 0.5), 1.0, 0.05),
    };
    for (const auto& s : strategies) {
        const BidDistribution bd = pushforward(s);
        const Distribution& f = s.base();
        for (int i = 0; i < 100; ++i) {
            const double x =
                f.lo() + (f.hi() - f.lo()) * rng.u01(1, static_cast<std::uint64_t>(i));
            CHECK(std::fabs(bd.cdf(s.bid(x)) - f.cdf(x)) < 1e-9);
        }
        // Bid maps only overbid inside the shading window.
        const double lo_thr = s.kind() == StrategyKind::DoubleThreshold ? s.x0() : f.lo();
        const double hi_thr = s.kind() == StrategyKind::DoubleThreshold ? s.x1() : s.r();
        for (int i = 0; i < 50; ++i) {
            const double x =
                f.lo() + (f.hi() - f.lo()) * rng.u01(2, static_cast<std::uint64_t>(i));
            if (x > lo_thr && x <= hi_thr) {
                CHECK(s.bid(x) >= x - 1e-12);
            } else {
                CHECK(s.bid(x) == x);
            }
        }
    }

    // Flat revenue plateau over the image of the shading window.
    const Strategy dt = Strategy::double_threshold(u01(), 0.2, 0.8);
    const BidDistribution bd = pushforward(dt);
    const double plateau = dt.plateau_revenue();
    const double jump = dt.bid(0.2000001);
    for (int i = 0; i <= 1000; ++i) {
        const double b = jump + (0.8 - jump) * i / 1000.0;
        CHECK(std::fabs(bd.revenue(b) - plateau) < 1e-9);
    }
    // Quasi-concavity of the bid revenue curve on a grid.
    double prev = 0.0;
    bool rising = true;
    for (int i = 0; i <= 2000; ++i) {
        const double b = bd.lo() + (bd.hi() - bd.lo()) * i / 2000.0;
        const double v = bd.revenue(b);
        if (rising && v < prev - 1e-10) rising = false;
        if (!rising) CHECK(v <= prev + 1e-10);
        prev = v;
    }
    // Never out-earns truthful bidding.
    double sup_bid = 0.0, sup_truth = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double b = i / 2000.0;
        sup_bid = std::max(sup_bid, bd.revenue(b));
        sup_truth = std::max(sup_truth, u01().revenue(b));
    }
    CHECK(sup_bid <= sup_truth + 1e-9);
}

TEST_CASE("monte carlo sample of bids matches the pushforward cdf") {
    const Strategy s = Strategy::eps_threshold(u01(), 0.5, 0.02);
    const BidDistribution bd = pushforward(s);
    const num::CounterRng rng{123};
    const int n = 100000;
    std::vector<double> bids(n);
    for (int i = 0; i < n; ++i) {
        bids[static_cast<std::size_t>(i)] =
            s.bid(u01().quantile(rng.u01(1, static_cast<std::uint64_t>(i))));
    }
    std::sort(bids.begin(), bids.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double fb = bd.cdf(bids[static_cast<std::size_t>(i)]);
        ks = std::max(ks, std::fabs(fb - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::fabs(fb - static_cast<double>(i) / n));
    }
    CHECK(ks < 2.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("threshold constraints are validated") {
    // x0 beyond xbar0: revenue(0.4) = 0.24 > 0.1875 = plateau of x1 = 0.75.
    CHECK_THROWS_AS(Strategy::double_threshold(u01(), 0.4, 0.75), InvalidThresholds);
    CHECK_THROWS_AS(Strategy::eps_threshold(u01(), 0.5, 0.6), InvalidThresholds);
    CHECK_THROWS_AS(Strategy::eps_threshold(u01(), 0.5, -0.01), InvalidThresholds);
    CHECK_THROWS_AS(Strategy::double_threshold(u01(), 0.8, 0.75), InvalidThresholds);
    // Degenerate double threshold behaves truthfully.
    const Strategy deg = Strategy::double_threshold(u01(), 0.6, 0.6);
    CHECK(deg.bid(0.3) == 0.3);
    CHECK(deg.bid(0.9) == 0.9);
}
