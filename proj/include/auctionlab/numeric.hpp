#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace auctionlab::num {

/// Default absolute/relative tolerances for adaptive quadrature.
inline constexpr double kQuadAbsTol = 1e-10;
inline constexpr double kQuadRelTol = 1e-9;
/// Default argument tolerance for bracketed root finding and 1-d optimization.
inline constexpr double kRootTol = 1e-10;

using Fn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Known kinks or jumps of the integrand must be passed as breakpoints;
/// the interval is split there before adaptive subdivision.
double integrate(const Fn& f, double a, double b,
                 std::span<const double> breakpoints = {},
                 double abs_tol = kQuadAbsTol, double rel_tol = kQuadRelTol);

/// Fixed-order Gauss-Legendre panel, no error control. Used in hot scans
/// where the integrand is smooth on the panel.
double gauss_legendre_32(const Fn& f, double a, double b);

/// Root of f on [lo,hi]; requires a sign change. Bisection with secant
/// acceleration, tolerance on the argument.
double find_root(const Fn& f, double lo, double hi, double xtol = kRootTol);

/// Golden-section maximizer of f on [a,b]; assumes unimodality on the bracket.
double golden_max(const Fn& f, double a, double b, double xtol = kRootTol);

/// Smallest x in [lo,hi] with pred(x) true; pred must be false at lo and
/// true at hi (monotone switch). Bisection on the predicate.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double xtol = kRootTol);

double norm_cdf(double x);
double norm_quantile(double p);

/// Counter-based splittable RNG: every (seed, stream, index) triple maps to an
/// independent uniform draw, so parallel simulations are reproducible
/// independently of scheduling.
struct CounterRng {
    std::uint64_t seed;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
        return mix(mix(mix(seed) ^ stream) ^ index);
    }

    /// Uniform double in [0,1).
    double u01(std::uint64_t stream, std::uint64_t index) const {
        return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
    }
};

/// Mean and standard error via batch means over `batches` contiguous blocks.
struct BatchStats {
    double mean = 0.0;
    double se = 0.0;
};
BatchStats batch_stats(std::span<const double> batch_means);

} // namespace auctionlab::num
