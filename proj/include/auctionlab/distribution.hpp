#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace auctionlab {

enum class Family { Uniform, Exponential, TruncatedLogNormal, PiecewiseEmpirical };

/// A one-dimensional value distribution on a compact support [lo,hi].
///
/// Families with unbounded upper tails (exponential, lognormal) are truncated
/// at a configurable bound (default: the 1-1e-9 quantile) and renormalized, so
/// every instance has finite support and 1-F(x) = o(1/x) holds trivially.
///
/// Instances are immutable; all evaluations are pure and safe to call
/// concurrently.
class Distribution {
public:
    static Distribution uniform(double a, double b);
    static Distribution exponential(double rate, std::optional<double> upper = std::nullopt);
    static Distribution truncated_lognormal(double mu, double sigma, double lower = 0.0,
                                            std::optional<double> upper = std::nullopt);
    /// knots: (x, cdf) pairs; the cdf is interpolated linearly between knots
    /// and the pdf is the piecewise slope.
    static Distribution piecewise_empirical(std::vector<std::array<double, 2>> knots);

    Family family() const;
    double lo() const;
    double hi() const;

    double cdf(double x) const;      // 0 below lo, 1 above hi
    double pdf(double x) const;      // 0 outside [lo,hi]
    double quantile(double p) const; // p in [0,1]

    /// Myerson virtual value psi(x) = x - (1-F(x))/f(x).
    double psi(double x) const;
    /// Hazard rate f(x)/(1-F(x)).
    double hazard(double x) const;
    /// Seller revenue at reserve r against a truthful bidder: r(1-F(r)).
    double revenue(double r) const;
    /// Smallest maximizer of the revenue curve; psi^-1(0) for regular laws.
    double monopoly_price() const;
    /// Smallest root of psi(x) = v in the support.
    double psi_inverse(double v) const;

    /// Interior kink locations (piecewise-empirical knots); passed to
    /// integrators as mandatory breakpoints.
    std::vector<double> interior_breakpoints() const;

    /// Parameter accessors used for serialization.
    struct UniformParams {
        double a, b;
    };
    struct ExponentialParams {
        double rate, upper;
        bool upper_explicit;
    };
    struct LogNormalParams {
        double mu, sigma, lower, upper;
        bool lower_explicit, upper_explicit;
    };
    using Knots = std::vector<std::array<double, 2>>;
    const UniformParams& uniform_params() const;
    const ExponentialParams& exponential_params() const;
    const LogNormalParams& lognormal_params() const;
    const Knots& knots() const;

private:
    struct Uniform {
        double a, b;
    };
    struct Exponential {
        double rate, upper, z; // z = 1 - exp(-rate*upper)
        bool upper_explicit;
    };
    struct LogNormal {
        double mu, sigma, lower, upper;
        double plo, phi, z; // z = phi - plo
        bool lower_explicit, upper_explicit;
    };
    struct Piecewise {
        std::vector<double> x, p, slope;
        Knots raw;
    };
    using Impl = std::variant<Uniform, Exponential, LogNormal, Piecewise>;
    explicit Distribution(Impl impl);
    Impl impl_;
    mutable UniformParams uparams_{};
    mutable ExponentialParams eparams_{};
    mutable LogNormalParams lparams_{};
};

// Spec-facing free functions over the Myerson transforms.
double virtual_value(const Distribution& d, double x);
double monopoly_price(const Distribution& d);
double revenue_curve(const Distribution& d, double r);

struct QuasiRegularityReport {
    bool quasi_regular = true;
    /// Grid cells [x_i, x_{i+1}] violating the rise-then-fall pattern.
    std::vector<std::array<double, 2>> violations;
};
/// True iff the revenue curve is quasi-concave on a 10^4-point grid
/// (tolerance 1e-10 on cell-to-cell comparisons).
QuasiRegularityReport check_quasi_regular(const Distribution& d);

/// Dense piecewise-linear approximation of F^power, used for symmetric
/// competition cdfs G = F^(K-1).
Distribution power_of_cdf(const Distribution& d, int power, int n_knots = 20001);

} // namespace auctionlab
