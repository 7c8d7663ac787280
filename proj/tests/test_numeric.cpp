#include <doctest.h>

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <cmath>
#include <vector>

using namespace auctionlab;

TEST_CASE("adaptive quadrature on smooth and kinked integrands") {
    const double a = num::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(std::fabs(a - 1.0 / 3.0) < 1e-12);

    // |x - 0.3| has a kink; pass it as a breakpoint.
    const std::vector<double> breaks{0.3};
    const double b = num::integrate([](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0, breaks);
    CHECK(std::fabs(b - (0.09 + 0.49) / 2.0) < 1e-12);

    const double c = num::integrate([](double x) { return std::sin(10.0 * x); }, 0.0, 3.0);
    CHECK(std::fabs(c - (1.0 - std::cos(30.0)) / 10.0) < 1e-10);

    CHECK(num::integrate([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("bracketed root finding") {
    const double r = num::find_root([](double x) { return std::cos(x); }, 0.0, 2.0);
    CHECK(std::fabs(r - 1.5707963267948966) < 1e-9);
    CHECK_THROWS_AS(num::find_root([](double x) { return 1.0 + x * x; }, 0.0, 1.0), NoRoot);
}

TEST_CASE("golden section maximizer") {
    const double m = num::golden_max([](double x) { return -(x - 0.37) * (x - 0.37); }, 0.0, 1.0, 1e-12);
    CHECK(std::fabs(m - 0.37) < 1e-9);
}

TEST_CASE("predicate bisection finds the switch point") {
    const double x = num::bisect_predicate([](double v) { return v >= 0.625; }, 0.0, 1.0, 1e-12);
    CHECK(std::fabs(x - 0.625) < 1e-11);
}

TEST_CASE("normal cdf and quantile") {
    CHECK(std::fabs(num::norm_cdf(0.0) - 0.5) < 1e-15);
    CHECK(std::fabs(num::norm_cdf(1.96) - 0.9750021048517795) < 1e-12);
    for (double p : {1e-8, 0.011, 0.3, 0.5, 0.77, 0.9995, 1.0 - 1e-9}) {
        CHECK(std::fabs(num::norm_cdf(num::norm_quantile(p)) - p) < 1e-12);
    }
}

TEST_CASE("counter rng is deterministic and roughly uniform") {
    const num::CounterRng rng{42};
    CHECK(rng.u01(3, 17) == rng.u01(3, 17));
    CHECK(rng.u01(3, 17) != rng.u01(3, 18));
    CHECK(rng.u01(3, 17) != rng.u01(4, 17));
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += rng.u01(1, static_cast<std::uint64_t>(i));
    CHECK(std::fabs(sum / n - 0.5) < 0.01);
}

TEST_CASE("batch means standard error") {
    std::vector<double> means{1.0, 1.0, 1.0, 1.0};
    auto s = num::batch_stats(means);
    CHECK(s.mean == 1.0);
    CHECK(s.se == 0.0);
    std::vector<double> spread{0.0, 2.0};
    s = num::batch_stats(spread);
    CHECK(std::fabs(s.mean - 1.0) < 1e-15);
    CHECK(std::fabs(s.se - 1.0) < 1e-15);
}
