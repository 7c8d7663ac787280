#include "auctionlab/strategy.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace auctionlab {

Strategy::Strategy(StrategyKind kind, Distribution base, double x0, double x1, double r, double eps)
    : kind_(kind), base_(std::move(base)), x0_(x0), x1_(x1), r_(r), eps_(eps) {}

Strategy Strategy::truthful(Distribution base) {
    return Strategy(StrategyKind::Truthful, std::move(base), 0.0, 0.0, 0.0, 0.0);
}

Strategy Strategy::double_threshold(Distribution base, double x0, double x1) {
    const double lo = base.lo();
    const double hi = base.hi();
    if (!(x0 >= lo - 1e-12) || !(x1 <= hi + 1e-12) || !(x0 <= x1)) {
        throw InvalidThresholds("double_threshold: need lo <= x0 <= x1 <= hi");
    }
    Strategy s(StrategyKind::DoubleThreshold, std::move(base), x0, x1, 0.0, 0.0);
    s.plateau_ = s.base_.revenue(x1);
    // Theorem constraint x0 <= xbar0 = inf{x : x(1-F(x)) >= R}, i.e. the
    // truthful branch below x0 must not out-earn the plateau.
    if (x0 < x1 && s.base_.revenue(x0) > s.plateau_ + 1e-9 * std::max(1.0, s.plateau_)) {
        throw InvalidThresholds("double_threshold: x0 exceeds xbar0 for this x1");
    }
    return s;
}

Strategy Strategy::eps_threshold(Distribution base, double r, double eps) {
    const double lo = base.lo();
    const double hi = base.hi();
    if (!(eps >= 0.0)) throw InvalidThresholds("eps_threshold: eps must be >= 0");
    if (!(r > lo && r <= hi)) throw InvalidThresholds("eps_threshold: r outside support");
    if (!(eps < r)) throw InvalidThresholds("eps_threshold: requires eps < r");
    Strategy s(StrategyKind::EpsThreshold, std::move(base), 0.0, 0.0, r, eps);
    s.plateau_ = (r - eps) * (1.0 - s.base_.cdf(r));
    return s;
}

double Strategy::bid(double x) const {
    if (x < base_.lo() - 1e-12 || x > base_.hi() + 1e-12) {
        throw OutOfSupport("bid: value outside support");
    }
    switch (kind_) {
    case StrategyKind::Truthful:
        return x;
    case StrategyKind::DoubleThreshold:
        if (x <= x0_ || x > x1_) return x;
        return plateau_ / (1.0 - base_.cdf(x));
    case StrategyKind::EpsThreshold:
        if (x > r_) return x;
        return plateau_ / (1.0 - base_.cdf(x)) + eps_;
    }
    return x;
}

double Strategy::bid_derivative(double x) const {
    if (x < base_.lo() - 1e-12 || x > base_.hi() + 1e-12) {
        throw OutOfSupport("bid_derivative: value outside support");
    }
    const auto shading_slope = [this](double xx, double plateau) {
        const double s = 1.0 - base_.cdf(xx);
        return plateau * base_.pdf(xx) / (s * s);
    };
    switch (kind_) {
    case StrategyKind::Truthful:
        return 1.0;
    case StrategyKind::DoubleThreshold:
        if (x <= x0_ || x > x1_) return 1.0;
        return shading_slope(x, plateau_);
    case StrategyKind::EpsThreshold:
        if (x > r_) return 1.0;
        return shading_slope(x, plateau_);
    }
    return 1.0;
}

double Strategy::bid_virtual_value(double x) const {
    if (x < base_.lo() - 1e-12 || x > base_.hi() + 1e-12) {
        throw OutOfSupport("bid_virtual_value: value outside support");
    }
    switch (kind_) {
    case StrategyKind::Truthful:
        return base_.psi(x);
    case StrategyKind::DoubleThreshold:
        if (x <= x0_ || x > x1_) return base_.psi(x);
        return 0.0;
    case StrategyKind::EpsThreshold:
        if (x > r_) return base_.psi(x);
        return eps_;
    }
    return base_.psi(x);
}

double Strategy::perceived_virtual_value(const Distribution& alt, double x) const {
    if (x <= alt.lo() || x >= alt.hi()) throw OutOfSupport("perceived_virtual_value: outside alt support");
    const double g = alt.pdf(x);
    if (g <= 0.0) throw DegenerateDensity("perceived_virtual_value: alt has zero density");
    const double inv_lambda_alt = (1.0 - alt.cdf(x)) / g;
    const double f = base_.pdf(x);
    if (f <= 0.0) throw DegenerateDensity("perceived_virtual_value: base has zero density");
    const double inv_lambda_base = (1.0 - base_.cdf(x)) / f;
    return bid_virtual_value(x) - bid_derivative(x) * (inv_lambda_alt - inv_lambda_base);
}

double Strategy::inverse_bid(double b) const {
    const double lo = base_.lo();
    const double hi = base_.hi();
    switch (kind_) {
    case StrategyKind::Truthful:
        return std::clamp(b, lo, hi);
    case StrategyKind::DoubleThreshold: {
        if (x0_ >= x1_) return std::clamp(b, lo, hi); // degenerate: truthful
        if (b <= x0_) return std::clamp(b, lo, x0_);
        const double jump = plateau_ / (1.0 - base_.cdf(x0_));
        if (b < jump) return x0_; // support gap just above x0
        if (b <= x1_) return base_.quantile(1.0 - plateau_ / b);
        return std::min(b, hi);
    }
    case StrategyKind::EpsThreshold: {
        const double bmin = min_bid();
        if (b <= bmin) return lo;
        if (b <= r_) return base_.quantile(1.0 - plateau_ / (b - eps_));
        return std::min(b, hi);
    }
    }
    return std::clamp(b, lo, hi);
}

double Strategy::min_bid() const {
    const double lo = base_.lo();
    switch (kind_) {
    case StrategyKind::Truthful:
        return lo;
    case StrategyKind::DoubleThreshold:
        if (x0_ > lo || x0_ >= x1_) return lo;
        return plateau_ / (1.0 - base_.cdf(lo));
    case StrategyKind::EpsThreshold:
        return plateau_ / (1.0 - base_.cdf(lo)) + eps_;
    }
    return lo;
}

double Strategy::max_bid() const {
    return base_.hi();
}

std::vector<double> Strategy::value_breakpoints() const {
    switch (kind_) {
    case StrategyKind::Truthful:
        return {};
    case StrategyKind::DoubleThreshold:
        return {x0_, x1_};
    case StrategyKind::EpsThreshold:
        return {r_};
    }
    return {};
}

BidDistribution::BidDistribution(Strategy s) : strategy_(std::move(s)) {}

BidDistribution pushforward(const Strategy& s) {
    return BidDistribution(s);
}

double BidDistribution::lo() const {
    return strategy_.min_bid();
}

double BidDistribution::hi() const {
    return strategy_.max_bid();
}

double BidDistribution::cdf(double b) const {
    return strategy_.base().cdf(strategy_.inverse_bid(b));
}

double BidDistribution::pdf(double b) const {
    if (b < lo() || b > hi()) return 0.0;
    const double x = strategy_.inverse_bid(b);
    // Inside a bid-support gap the inverse is pinned to the gap edge.
    if (std::fabs(strategy_.bid(x) - b) > 1e-9 * std::max(1.0, std::fabs(b))) return 0.0;
    return strategy_.base().pdf(x) / strategy_.bid_derivative(x);
}

double BidDistribution::quantile(double p) const {
    return strategy_.bid(strategy_.base().quantile(p));
}

double BidDistribution::revenue(double b) const {
    // Our bid laws are atomless (continuous base, strictly increasing map
    // where f > 0), so F_B(b^-) = F_B(b).
    if (b >= hi()) return 0.0;
    return b * (1.0 - cdf(b));
}

} // namespace auctionlab
