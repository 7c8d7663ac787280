#include "auctionlab/distribution.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace auctionlab {

namespace {

constexpr double kTailMass = 1e-9; // default truncation: quantile(1 - 1e-9)
constexpr int kScanGrid = 10000;

double lognormal_sigma_arg(double x, double mu, double sigma) {
    return (std::log(x) - mu) / sigma;
}

} // namespace

Distribution::Distribution(Impl impl) : impl_(std::move(impl)) {}

Distribution Distribution::uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigInvalid("uniform: requires a < b and finite bounds");
    }
    return Distribution(Uniform{a, b});
}

Distribution Distribution::exponential(double rate, std::optional<double> upper) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigInvalid("exponential: rate must be positive");
    const bool explicit_upper = upper.has_value();
    const double u = explicit_upper ? *upper : -std::log(kTailMass) / rate;
    if (!(u > 0.0) || !std::isfinite(u)) throw ConfigInvalid("exponential: upper bound must be positive and finite");
    const double z = -std::expm1(-rate * u);
    return Distribution(Exponential{rate, u, z, explicit_upper});
}

Distribution Distribution::truncated_lognormal(double mu, double sigma, double lower,
                                               std::optional<double> upper) {
    if (!(sigma > 0.0)) throw ConfigInvalid("truncated_lognormal: sigma must be positive");
    if (lower < 0.0) throw ConfigInvalid("truncated_lognormal: lower must be >= 0");
    const bool explicit_upper = upper.has_value();
    const double u = explicit_upper ? *upper : std::exp(mu + sigma * num::norm_quantile(1.0 - kTailMass));
    if (!(u > lower)) throw ConfigInvalid("truncated_lognormal: upper must exceed lower");
    const double plo = lower > 0.0 ? num::norm_cdf(lognormal_sigma_arg(lower, mu, sigma)) : 0.0;
    const double phi = num::norm_cdf(lognormal_sigma_arg(u, mu, sigma));
    const double z = phi - plo;
    if (!(z > 0.0)) throw ConfigInvalid("truncated_lognormal: truncation window has no mass");
    return Distribution(LogNormal{mu, sigma, lower, u, plo, phi, z, lower > 0.0, explicit_upper});
}

Distribution Distribution::piecewise_empirical(Knots knots) {
    if (knots.size() < 2) throw ConfigInvalid("piecewise_empirical: need at least two knots");
    Piecewise pw;
    pw.raw = knots;
    pw.x.reserve(knots.size());
    pw.p.reserve(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0 && !(knots[i][0] > knots[i - 1][0])) {
            throw ConfigInvalid("piecewise_empirical: knot x-values must be strictly increasing");
        }
        if (i > 0 && knots[i][1] < knots[i - 1][1] - 1e-14) {
            throw ConfigInvalid("piecewise_empirical: knot cdf values must be nondecreasing");
        }
        pw.x.push_back(knots[i][0]);
        pw.p.push_back(knots[i][1]);
    }
    const double p0 = pw.p.front();
    const double p1 = pw.p.back();
    if (std::fabs(p0) > 1e-12 || std::fabs(p1 - 1.0) > 1e-12) {
        throw ConfigInvalid("piecewise_empirical: cdf must run from 0 to 1 (within 1e-12)");
    }
    // Renormalize exactly so cdf(lo) = 0 and cdf(hi) = 1.
    for (double& p : pw.p) p = (p - p0) / (p1 - p0);
    pw.p.front() = 0.0;
    pw.p.back() = 1.0;
    pw.slope.resize(pw.x.size() - 1);
    for (std::size_t i = 0; i + 1 < pw.x.size(); ++i) {
        pw.slope[i] = (pw.p[i + 1] - pw.p[i]) / (pw.x[i + 1] - pw.x[i]);
    }
    return Distribution(std::move(pw));
}

Family Distribution::family() const {
    if (std::holds_alternative<Uniform>(impl_)) return Family::Uniform;
    if (std::holds_alternative<Exponential>(impl_)) return Family::Exponential;
    if (std::holds_alternative<LogNormal>(impl_)) return Family::TruncatedLogNormal;
    return Family::PiecewiseEmpirical;
}

double Distribution::lo() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) return d.a;
            else if constexpr (std::is_same_v<T, Exponential>) return 0.0;
            else if constexpr (std::is_same_v<T, LogNormal>) return d.lower;
            else return d.x.front();
        },
        impl_);
}

double Distribution::hi() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) return d.b;
            else if constexpr (std::is_same_v<T, Exponential>) return d.upper;
            else if constexpr (std::is_same_v<T, LogNormal>) return d.upper;
            else return d.x.back();
        },
        impl_);
}

double Distribution::cdf(double x) const {
    if (x <= lo()) return 0.0;
    if (x >= hi()) return 1.0;
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return (x - d.a) / (d.b - d.a);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::expm1(-d.rate * x) / d.z;
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return (num::norm_cdf(lognormal_sigma_arg(x, d.mu, d.sigma)) - d.plo) / d.z;
            } else {
                const auto it = std::upper_bound(d.x.begin(), d.x.end(), x);
                const std::size_t i = static_cast<std::size_t>(it - d.x.begin()) - 1;
                return d.p[i] + d.slope[i] * (x - d.x[i]);
            }
        },
        impl_);
}

double Distribution::pdf(double x) const {
    if (x < lo() || x > hi()) return 0.0;
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return 1.0 / (d.b - d.a);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return d.rate * std::exp(-d.rate * x) / d.z;
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                if (x <= 0.0) return 0.0;
                const double t = lognormal_sigma_arg(x, d.mu, d.sigma);
                return std::exp(-0.5 * t * t) / (x * d.sigma * 2.5066282746310002) / d.z;
            } else {
                auto it = std::upper_bound(d.x.begin(), d.x.end(), x);
                std::size_t i = static_cast<std::size_t>(it - d.x.begin());
                if (i == 0) return d.slope.front();
                if (i >= d.x.size()) return d.slope.back();
                return d.slope[i - 1];
            }
        },
        impl_);
}

double Distribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfSupport("quantile: p outside [0,1]");
    if (p <= 0.0) return lo();
    if (p >= 1.0) return hi();
    return std::visit(
        [p](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return d.a + p * (d.b - d.a);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log1p(-p * d.z) / d.rate;
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::exp(d.mu + d.sigma * num::norm_quantile(d.plo + p * d.z));
            } else {
                const auto it = std::upper_bound(d.p.begin(), d.p.end(), p);
                std::size_t i = static_cast<std::size_t>(it - d.p.begin());
                if (i == 0) return d.x.front();
                --i;
                // Flat segments carry no mass; resolve to their left edge.
                if (d.slope[i] <= 0.0) return d.x[i];
                return d.x[i] + (p - d.p[i]) / d.slope[i];
            }
        },
        impl_);
}

double Distribution::psi(double x) const {
    if (x < lo() || x > hi()) throw OutOfSupport("psi: x outside support");
    const double f = pdf(x);
    const double s = 1.0 - cdf(x);
    if (f <= 0.0) {
        if (s <= 0.0) throw DegenerateDensity("psi: 0/0 at upper support end");
        throw DegenerateDensity("psi: zero density");
    }
    return x - s / f;
}

double Distribution::hazard(double x) const {
    if (x < lo() || x > hi()) throw OutOfSupport("hazard: x outside support");
    const double f = pdf(x);
    if (f <= 0.0) throw DegenerateDensity("hazard: zero density");
    const double s = 1.0 - cdf(x);
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    return f / s;
}

double Distribution::revenue(double r) const {
    if (r >= hi()) return 0.0;
    return r * (1.0 - cdf(r));
}

namespace {

struct RevenueScan {
    std::vector<double> grid;
    std::vector<double> value;
    std::size_t argmax = 0;
};

RevenueScan scan_revenue(const Distribution& d) {
    RevenueScan s;
    s.grid.resize(kScanGrid + 1);
    s.value.resize(kScanGrid + 1);
    const double a = d.lo();
    const double b = d.hi();
    for (int i = 0; i <= kScanGrid; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / kScanGrid;
        s.grid[static_cast<std::size_t>(i)] = x;
        s.value[static_cast<std::size_t>(i)] = d.revenue(x);
    }
    s.argmax = static_cast<std::size_t>(
        std::max_element(s.value.begin(), s.value.end()) - s.value.begin());
    return s;
}

QuasiRegularityReport grid_quasi_concavity(const RevenueScan& s) {
    QuasiRegularityReport rep;
    constexpr double tol = 1e-10;
    for (std::size_t i = 0; i + 1 < s.value.size(); ++i) {
        const bool ok = i < s.argmax ? s.value[i + 1] >= s.value[i] - tol
                                     : s.value[i + 1] <= s.value[i] + tol;
        if (!ok) {
            rep.quasi_regular = false;
            rep.violations.push_back({s.grid[i], s.grid[i + 1]});
        }
    }
    return rep;
}

} // namespace

double Distribution::monopoly_price() const {
    const RevenueScan s = scan_revenue(*this);
    const auto rep = grid_quasi_concavity(s);
    if (!rep.quasi_regular) {
        throw NotUnimodal("monopoly_price: revenue curve is not quasi-concave on the scan grid");
    }
    const std::size_t j = s.argmax;
    const double a = s.grid[j == 0 ? 0 : j - 1];
    const double b = s.grid[std::min(j + 1, s.grid.size() - 1)];
    // Refine the peak value, then locate the smallest maximizer.
    const double peak_arg = num::golden_max([this](double r) { return revenue(r); }, a, b, 1e-12);
    const double peak = std::max({revenue(peak_arg), s.value[j]});
    auto dR = [this](double r) { return (1.0 - cdf(r)) - r * pdf(r); };
    if (dR(a) > 0.0 && dR(b) < 0.0) {
        return num::find_root(dR, a, b, 1e-10);
    }
    // Plateau or edge maximum: first point whose revenue reaches the peak.
    const double eps = 1e-13 * std::max(1.0, peak);
    const double lo_edge = lo();
    std::size_t first = j;
    while (first > 0 && s.value[first - 1] >= peak - eps) --first;
    const double left = first == 0 ? lo_edge : s.grid[first - 1];
    const double right = s.grid[first];
    if (revenue(left) >= peak - eps) return left;
    return num::bisect_predicate([&](double r) { return revenue(r) >= peak - eps; }, left, right, 1e-10);
}

double Distribution::psi_inverse(double v) const {
    if (const auto* u = std::get_if<Uniform>(&impl_)) {
        // psi(x) = 2x - b for U(a,b)
        return std::clamp(0.5 * (v + u->b), u->a, u->b);
    }
    const double a = lo();
    const double b = hi();
    auto g = [this, v](double x) { return psi(x) - v; };
    const double ga = psi(a + (b - a) * 1e-12) - v;
    if (ga >= 0.0) return a;
    if (psi(b) <= v) return b;
    return num::find_root(g, a + (b - a) * 1e-12, b, 1e-12);
}

std::vector<double> Distribution::interior_breakpoints() const {
    if (const auto* pw = std::get_if<Piecewise>(&impl_)) {
        if (pw->x.size() <= 2) return {};
        return {pw->x.begin() + 1, pw->x.end() - 1};
    }
    return {};
}

const Distribution::UniformParams& Distribution::uniform_params() const {
    const auto& u = std::get<Uniform>(impl_);
    uparams_ = {u.a, u.b};
    return uparams_;
}

const Distribution::ExponentialParams& Distribution::exponential_params() const {
    const auto& e = std::get<Exponential>(impl_);
    eparams_ = {e.rate, e.upper, e.upper_explicit};
    return eparams_;
}

const Distribution::LogNormalParams& Distribution::lognormal_params() const {
    const auto& l = std::get<LogNormal>(impl_);
    lparams_ = {l.mu, l.sigma, l.lower, l.upper, l.lower_explicit, l.upper_explicit};
    return lparams_;
}

const Distribution::Knots& Distribution::knots() const {
    return std::get<Piecewise>(impl_).raw;
}

double virtual_value(const Distribution& d, double x) {
    return d.psi(x);
}

double monopoly_price(const Distribution& d) {
    return d.monopoly_price();
}

double revenue_curve(const Distribution& d, double r) {
    return d.revenue(r);
}

QuasiRegularityReport check_quasi_regular(const Distribution& d) {
    return grid_quasi_concavity(scan_revenue(d));
}

Distribution power_of_cdf(const Distribution& d, int power, int n_knots) {
    if (power < 1) throw ConfigInvalid("power_of_cdf: power must be >= 1");
    if (power == 1) return d;
    std::vector<std::array<double, 2>> knots;
    knots.reserve(static_cast<std::size_t>(n_knots));
    const double a = d.lo();
    const double b = d.hi();
    for (int i = 0; i < n_knots; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / (n_knots - 1);
        knots.push_back({x, std::pow(d.cdf(x), power)});
    }
    knots.front()[1] = 0.0;
    knots.back()[1] = 1.0;
    return Distribution::piecewise_empirical(std::move(knots));
}

} // namespace auctionlab
