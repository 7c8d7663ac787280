#include <doctest.h>

#include "auctionlab/distribution.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <cmath>
#include <vector>

using namespace auctionlab;

namespace {

// Dense grid argmax of the revenue curve, refined to step `fine` around the
// coarse winner. Independent of the monopoly_price implementation.
double grid_monopoly_oracle(const Distribution& d, double coarse = 1e-3, double fine = 1e-6) {
    double best = -1.0, arg = d.lo();
    for (double r = d.lo(); r <= d.hi(); r += coarse) {
        const double v = d.revenue(r);
        if (v > best) {
            best = v;
            arg = r;
        }
    }
    double refined = arg;
    for (double r = arg - coarse; r <= arg + coarse; r += fine) {
        const double v = d.revenue(r);
        if (v > best) {
            best = v;
            refined = r;
        }
    }
    return refined;
}

Distribution two_bump_law() {
    // Engineered so r(1-F(r)) has separated local maxima near 0.2 and 0.9.
    return Distribution::piecewise_empirical(
        {{0.0, 0.0}, {0.2, 0.1}, {0.3, 0.55}, {0.9, 0.65}, {1.0, 1.0}});
}

} // namespace

TEST_CASE("uniform virtual value and monopoly price") {
    const Distribution u = Distribution::uniform(0.0, 1.0);
    CHECK(std::fabs(u.psi(0.5) - 0.0) < 1e-15);
    CHECK(std::fabs(u.psi(1.0) - 1.0) < 1e-15);
    CHECK(std::fabs(u.monopoly_price() - 0.5) < 1e-10);
    CHECK(std::fabs(Distribution::uniform(0.0, 2.0).monopoly_price() - 1.0) < 1e-10);
    CHECK(std::fabs(u.revenue(0.5) - 0.25) < 1e-15);
    CHECK(std::fabs(u.revenue(0.75) - 0.1875) < 1e-15);
    CHECK(u.revenue(0.0) == 0.0);
    CHECK(u.revenue(1.0) == 0.0); // at and beyond the upper end
}

TEST_CASE("truncated exponential matches the analytic tail forms") {
    const Distribution e = Distribution::exponential(1.0, 50.0);
    // Truncation correction to psi(x) = x - 1/rate is exp(-rate (U-x))/rate.
    const double corr = std::fabs(e.psi(2.0) - 1.0);
    CHECK(corr < 1e-8);
    const double oracle = grid_monopoly_oracle(e, 1e-2, 1e-6);
    CHECK(std::fabs(oracle - 1.0) < 1e-4);
    CHECK(std::fabs(e.monopoly_price() - oracle) < 2e-6);
    CHECK(check_quasi_regular(Distribution::exponential(4.0, 50.0)).quasi_regular);
}

TEST_CASE("quasi-regularity scan flags engineered double peaks") {
    CHECK(check_quasi_regular(Distribution::uniform(0.0, 1.0)).quasi_regular);
    const auto rep = check_quasi_regular(two_bump_law());
    CHECK_FALSE(rep.quasi_regular);
    CHECK_FALSE(rep.violations.empty());
    CHECK_THROWS_AS(two_bump_law().monopoly_price(), NotUnimodal);

    // Grid oracle: both 0.2-ish and 0.9-ish are local maxima of the revenue.
    const Distribution d = two_bump_law();
    CHECK(d.revenue(0.2) > d.revenue(0.25));
    CHECK(d.revenue(0.2) > d.revenue(0.15));
    CHECK(d.revenue(0.9) > d.revenue(0.85));
    CHECK(d.revenue(0.9) > d.revenue(0.95));
}

TEST_CASE("pdf mass, quantile identity and psi monotonicity per family") {
    const std::vector<Distribution> laws = {
        Distribution::uniform(0.0, 1.0),
        Distribution::exponential(1.0),
        Distribution::truncated_lognormal(0.0, 0.5),
        Distribution::piecewise_empirical({{0.0, 0.0}, {0.3, 0.4}, {0.7, 0.75}, {1.0, 1.0}}),
    };
    for (const auto& d : laws) {
        const double mass =
            num::integrate([&](double x) { return d.pdf(x); }, d.lo(), d.hi(), d.interior_breakpoints());
        CHECK(std::fabs(mass - 1.0) < 1e-8);
        for (int i = 1; i < 20; ++i) {
            const double x = d.lo() + (d.hi() - d.lo()) * i / 20.0;
            if (d.pdf(x) > 0.0) CHECK(std::fabs(d.quantile(d.cdf(x)) - x) < 1e-9);
        }
        CHECK(d.cdf(d.lo()) == 0.0);
        CHECK(d.cdf(d.hi()) == 1.0);
    }

    // Regular families: psi nondecreasing on a dense grid, psi(monopoly)=0.
    for (const auto& d : {laws[0], laws[1], laws[2]}) {
        double prev = -1e300;
        for (int i = 1; i < 10000; ++i) {
            const double x = d.lo() + (d.hi() - d.lo()) * i / 10000.0;
            const double p = d.psi(x);
            CHECK(p >= prev - 1e-10);
            CHECK(p < x + 1e-12);
            prev = p;
        }
        CHECK(std::fabs(d.psi(d.monopoly_price())) < 1e-8);
    }
}

TEST_CASE("revenue curve derivative matches finite differences") {
    const num::CounterRng rng{7};
    const Distribution laws[] = {Distribution::uniform(0.0, 1.0),
                                 Distribution::truncated_lognormal(0.1, 0.4)};
    for (const auto& d : laws) {
        for (int i = 0; i < 100; ++i) {
            const double x =
                d.lo() + (0.05 + 0.9 * rng.u01(1, static_cast<std::uint64_t>(i))) * (d.hi() - d.lo());
            const double analytic = (1.0 - d.cdf(x)) - x * d.pdf(x);
            const double h = 1e-6 * (d.hi() - d.lo());
            const double fd = (d.revenue(x + h) - d.revenue(x - h)) / (2.0 * h);
            CHECK(std::fabs(analytic - fd) / std::max({std::fabs(analytic), std::fabs(fd), 1e-3}) <
                  1e-5);
        }
    }
}

TEST_CASE("hazard identity links psi differences across laws") {
    const Distribution f = Distribution::uniform(0.0, 1.0);
    const Distribution g = Distribution::uniform(0.0, 1.1);
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double lhs = 1.0 / g.hazard(x) - 1.0 / f.hazard(x);
        const double rhs = f.psi(x) - g.psi(x);
        CHECK(std::fabs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("support and density error paths") {
    const Distribution u = Distribution::uniform(0.0, 1.0);
    CHECK_THROWS_AS(u.psi(-0.1), OutOfSupport);
    CHECK_THROWS_AS(u.psi(1.5), OutOfSupport);
    // An interior flat cdf segment carries zero density.
    const Distribution flat =
        Distribution::piecewise_empirical({{0.0, 0.0}, {0.4, 0.5}, {0.6, 0.5}, {1.0, 1.0}});
    CHECK_THROWS_AS(flat.psi(0.5), DegenerateDensity);
    CHECK_THROWS_AS(flat.hazard(0.5), DegenerateDensity);
    // Quantile ties resolve to the smallest argument.
    CHECK(std::fabs(flat.quantile(0.5) - 0.4) < 1e-12);
    CHECK_THROWS_AS(Distribution::uniform(1.0, 1.0), ConfigInvalid);
    CHECK_THROWS_AS(Distribution::exponential(-1.0), ConfigInvalid);
    CHECK_THROWS_AS(Distribution::piecewise_empirical({{0.0, 0.0}, {1.0, 0.9}}), ConfigInvalid);
}

TEST_CASE("power_of_cdf approximates F^k") {
    const Distribution f = Distribution::uniform(0.0, 1.0);
    const Distribution g = power_of_cdf(f, 3);
    for (double x : {0.1, 0.4, 0.8}) {
        CHECK(std::fabs(g.cdf(x) - x * x * x) < 1e-7);
    }
}
