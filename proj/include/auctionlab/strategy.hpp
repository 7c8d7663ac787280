#pragma once

#include "auctionlab/distribution.hpp"

#include <vector>

namespace auctionlab {

enum class StrategyKind { Truthful, DoubleThreshold, EpsThreshold };

/// A monotone bid map beta over a base value law F.
///
/// DoubleThreshold(x0,x1) bids truthfully outside (x0,x1] and flattens the
/// seller's revenue curve to R = x1(1-F(x1)) inside:
///   beta(x) = x               for x <= x0,
///           = R/(1-F(x))      for x0 < x <= x1,
///           = x               for x > x1.
///
/// EpsThreshold(r,eps) lifts the perceived virtual value to eps below r:
///   beta(x) = (r-eps)(1-F(r))/(1-F(x)) + eps  for x <= r,
///           = x                               for x > r.
///
/// Derivatives at a threshold point are one-sided from the left, and
/// evaluations exactly at a threshold return the left limit.
class Strategy {
public:
    static Strategy truthful(Distribution base);
    static Strategy double_threshold(Distribution base, double x0, double x1);
    static Strategy eps_threshold(Distribution base, double r, double eps);

    StrategyKind kind() const { return kind_; }
    const Distribution& base() const { return base_; }
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double r() const { return r_; }
    double eps() const { return eps_; }
    /// Plateau revenue R = x1(1-F(x1)) (double-threshold only).
    double plateau_revenue() const { return plateau_; }

    double bid(double x) const;
    /// Analytic left derivative of the bid map.
    double bid_derivative(double x) const;
    /// h_beta(x) = beta(x) - beta'(x)(1-F(x))/f(x), the virtual value of the
    /// pushforward bid distribution evaluated at beta(x).
    double bid_virtual_value(double x) const;
    /// Virtual value the seller computes when she models the bidder's values
    /// with `alt` while the truth is `base`.
    double perceived_virtual_value(const Distribution& alt, double x) const;

    /// Inverse of the bid map on the bid support; bids inside a support gap
    /// resolve to the value just below the gap.
    double inverse_bid(double b) const;

    double min_bid() const;
    double max_bid() const;
    /// Value-space kinks of the bid map ({x0,x1} or {r}).
    std::vector<double> value_breakpoints() const;

private:
    Strategy(StrategyKind kind, Distribution base, double x0, double x1, double r, double eps);
    StrategyKind kind_;
    Distribution base_;
    double x0_ = 0.0, x1_ = 0.0, r_ = 0.0, eps_ = 0.0;
    double plateau_ = 0.0; // R for double-threshold, (r-eps)(1-F(r)) for eps-threshold
};

/// Pushforward bid distribution B = beta(X) with analytic cdf/pdf/quantile.
class BidDistribution {
public:
    explicit BidDistribution(Strategy s);

    const Strategy& strategy() const { return strategy_; }
    double lo() const;
    double hi() const;
    double cdf(double b) const;
    double pdf(double b) const;
    double quantile(double p) const;
    /// Seller revenue b(1-F_B(b^-)) at reserve price b.
    double revenue(double b) const;

private:
    Strategy strategy_;
};

BidDistribution pushforward(const Strategy& s);

} // namespace auctionlab
