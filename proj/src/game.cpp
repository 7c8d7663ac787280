#include "auctionlab/game.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace auctionlab {

namespace {

// Interior kinks worth forwarding to the integrator; dense piecewise
// approximations (10^4+ knots) are smooth enough to leave to adaptivity.
std::vector<double> small_breaks(const Distribution& d) {
    auto b = d.interior_breakpoints();
    if (b.size() > 64) return {};
    return b;
}

void add_if_inside(std::vector<double>& v, double x, double a, double b) {
    if (x > a && x < b) v.push_back(x);
}

// Support edges of g seen through x (direct composition g(x)).
void add_edge_breaks(std::vector<double>& v, const Distribution& g, double a, double b) {
    add_if_inside(v, g.lo(), a, b);
    add_if_inside(v, g.hi(), a, b);
}

// Values where t(x) = plateau/(1-F(x)) crosses the support edges of g.
void add_mapped_edge_breaks(std::vector<double>& v, const Distribution& g, const Distribution& f,
                            double plateau, double a, double b) {
    for (double edge : {g.lo(), g.hi()}) {
        if (edge > 0.0 && plateau > 0.0 && plateau <= edge) {
            add_if_inside(v, f.quantile(1.0 - plateau / edge), a, b);
        }
    }
}

double cdf_or_one(const std::optional<Distribution>& h, double x) {
    return h ? h->cdf(x) : 1.0;
}

double pdf_or_zero(const std::optional<Distribution>& h, double x) {
    return h ? h->pdf(x) : 0.0;
}

// psi(x) f(x) without dividing by the density: x f(x) - (1 - F(x)).
double psi_times_pdf(const Distribution& f, double x) {
    return x * f.pdf(x) - (1.0 - f.cdf(x));
}

} // namespace

double myerson_payment(const Strategy& s, const Distribution& g, double r) {
    const Distribution& f = s.base();
    const double lo = f.lo();
    const double hi = f.hi();
    if (s.bid(hi) < r) return 0.0;
    const double x_r = s.bid(lo) >= r ? lo : s.inverse_bid(r);

    auto h_times_f = [&](double x) -> double {
        switch (s.kind()) {
        case StrategyKind::Truthful:
            return psi_times_pdf(f, x);
        case StrategyKind::DoubleThreshold:
            if (x <= s.x0() || x > s.x1()) return psi_times_pdf(f, x);
            return 0.0;
        case StrategyKind::EpsThreshold:
            if (x > s.r()) return psi_times_pdf(f, x);
            return s.eps() * f.pdf(x);
        }
        return psi_times_pdf(f, x);
    };
    auto integrand = [&](double x) { return h_times_f(x) * g.cdf(s.bid(x)); };

    std::vector<double> breaks = small_breaks(f);
    for (double x : s.value_breakpoints()) add_if_inside(breaks, x, x_r, hi);
    // Bids above the strategy's own thresholds are truthful, so g's edges
    // matter both directly and through the shading branch.
    add_edge_breaks(breaks, g, x_r, hi);
    add_mapped_edge_breaks(breaks, g, f, s.plateau_revenue(), x_r, hi);
    return num::integrate(integrand, x_r, hi, breaks);
}

namespace {

struct ProcessView {
    const Distribution& f;
    const Distribution& g;
    const std::optional<Distribution>& h;
    double alpha;

    double galpha(double x) const {
        const double gx = g.cdf(x);
        return alpha * gx * cdf_or_one(h, x) + (1.0 - alpha) * gx;
    }
    double galpha_density(double x) const {
        const double gx = g.cdf(x);
        const double gd = g.pdf(x);
        return alpha * (gd * cdf_or_one(h, x) + gx * pdf_or_zero(h, x)) + (1.0 - alpha) * gd;
    }
};

UtilityBreakdown truthful_two_stage(const TwoStageProcess& p) {
    const Distribution& f = p.value_law;
    const Distribution& g = p.competition;
    const auto& h = p.phase1_reserve;
    const double lo = f.lo();
    const double hi = f.hi();
    const double mp = f.monopoly_price();

    std::vector<double> breaks = small_breaks(f);
    add_edge_breaks(breaks, g, lo, hi);
    if (h) add_edge_breaks(breaks, *h, lo, hi);

    UtilityBreakdown out;
    out.u1 = num::integrate(
        [&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x) * cdf_or_one(h, x); }, lo, hi, breaks);
    out.m1 = num::integrate(
        [&](double x) { return psi_times_pdf(f, x) * g.cdf(x) * cdf_or_one(h, x); }, lo, hi, breaks);
    out.u2 = num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); }, mp, hi, breaks);
    out.m2 = num::integrate([&](double x) { return psi_times_pdf(f, x) * g.cdf(x); }, mp, hi, breaks);
    out.u_total = p.alpha * out.u1 + (1.0 - p.alpha) * out.u2;
    out.reserve_value = mp;
    return out;
}

} // namespace

UtilityBreakdown utility_two_stage(double x0, double x1, const TwoStageProcess& p) {
    const Distribution& f = p.value_law;
    const Distribution& g = p.competition;
    const auto& h = p.phase1_reserve;
    const double lo = f.lo();
    const double hi = f.hi();
    if (x0 < lo - 1e-12 || x1 > hi + 1e-12 || x0 > x1) {
        throw InvalidThresholds("utility_two_stage: need lo <= x0 <= x1 <= hi");
    }
    if (x1 - x0 <= 1e-15 * std::max(1.0, std::fabs(x1))) {
        return truthful_two_stage(p);
    }
    const double mp = f.monopoly_price();
    if (x1 < mp - 1e-9 * std::max(1.0, mp)) {
        throw InvalidThresholds("utility_two_stage: x1 below the monopoly price");
    }
    const double plateau = f.revenue(x1);
    if (f.revenue(x0) > plateau + 1e-9 * std::max(1.0, plateau)) {
        throw InvalidThresholds("utility_two_stage: x0 exceeds xbar0(x1)");
    }

    auto t = [&](double x) { return plateau / (1.0 - f.cdf(x)); };

    std::vector<double> outer = small_breaks(f);
    add_edge_breaks(outer, g, lo, hi);
    if (h) add_edge_breaks(outer, *h, lo, hi);
    std::vector<double> inner = small_breaks(f);
    add_mapped_edge_breaks(inner, g, f, plateau, x0, x1);
    if (h) add_mapped_edge_breaks(inner, *h, f, plateau, x0, x1);

    UtilityBreakdown out;
    out.reserve_value = x0;

    auto surv_gh = [&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x) * cdf_or_one(h, x); };
    auto surv_g = [&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); };
    auto mid_gh = [&](double x) {
        const double b = t(x);
        return x * g.cdf(b) * cdf_or_one(h, b) * f.pdf(x);
    };
    auto mid_g = [&](double x) { return x * g.cdf(t(x)) * f.pdf(x); };

    out.u1 = num::integrate(surv_gh, lo, x0, outer) + num::integrate(mid_gh, x0, x1, inner) +
             num::integrate(surv_gh, x1, hi, outer);
    out.u2 = num::integrate(mid_g, x0, x1, inner) + num::integrate(surv_g, x1, hi, outer);
    out.m1 = num::integrate([&](double x) { return psi_times_pdf(f, x) * g.cdf(x) * cdf_or_one(h, x); },
                            lo, x0, outer) +
             num::integrate([&](double x) { return psi_times_pdf(f, x) * g.cdf(x) * cdf_or_one(h, x); },
                            x1, hi, outer);
    out.m2 = num::integrate([&](double x) { return psi_times_pdf(f, x) * g.cdf(x); }, x1, hi, outer);
    out.u_total = p.alpha * out.u1 + (1.0 - p.alpha) * out.u2;
    return out;
}

std::pair<double, double> utility_grad(double x0, double x1, const TwoStageProcess& p) {
    const Distribution& f = p.value_law;
    const double lo = f.lo();
    const double hi = f.hi();
    if (x0 < lo - 1e-12 || x1 > hi + 1e-12 || x0 > x1) {
        throw OutOfSupport("utility_grad: point outside the feasible rectangle");
    }
    const ProcessView v{f, p.competition, p.phase1_reserve, p.alpha};
    const double plateau = f.revenue(x1);

    const double sx0 = 1.0 - f.cdf(x0);
    const double d_x0 = p.alpha * sx0 * p.competition.cdf(x0) * cdf_or_one(p.phase1_reserve, x0) -
                        x0 * f.pdf(x0) * v.galpha(plateau / sx0);

    std::vector<double> inner = small_breaks(f);
    add_mapped_edge_breaks(inner, p.competition, f, plateau, x0, x1);
    if (p.phase1_reserve) add_mapped_edge_breaks(inner, *p.phase1_reserve, f, plateau, x0, x1);
    const double expectation = num::integrate(
        [&](double x) {
            const double s = 1.0 - f.cdf(x);
            return x / s * v.galpha_density(plateau / s) * f.pdf(x);
        },
        x0, x1, inner);
    const double d_x1 = psi_times_pdf(f, x1) * (v.galpha(x1) - expectation);
    return {d_x0, d_x1};
}

namespace {

// Smallest x with x(1-F(x)) >= plateau; the upper bound for the feasible x0.
double xbar0(const Distribution& f, double plateau, double mp) {
    if (f.revenue(f.lo()) >= plateau) return f.lo();
    return num::bisect_predicate([&](double x) { return f.revenue(x) >= plateau; }, f.lo(), mp,
                                 1e-10);
}

struct ScanBest {
    double x0 = 0.0;
    double u = -1e300;
};

// Best x0 on a prefix grid for one fixed x1. The three x0-dependent pieces of
// the utility are cumulative integrals, so one sweep over the grid covers all
// candidates.
ScanBest scan_x1_slice(const TwoStageProcess& p, double x1, int grid, double mp) {
    const Distribution& f = p.value_law;
    const auto& g = p.competition;
    const auto& h = p.phase1_reserve;
    const double lo = f.lo();
    const double hi = f.hi();
    const double plateau = f.revenue(x1);
    const double xb = xbar0(f, plateau, mp);

    auto t = [&](double x) { return plateau / (1.0 - f.cdf(x)); };
    auto surv_gh = [&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x) * cdf_or_one(h, x); };
    auto surv_g = [&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); };
    auto mid_gh = [&](double x) {
        const double b = t(x);
        return x * g.cdf(b) * cdf_or_one(h, b) * f.pdf(x);
    };
    auto mid_g = [&](double x) { return x * g.cdf(t(x)) * f.pdf(x); };

    const double tail_gh = num::integrate(surv_gh, x1, hi);
    const double tail_g = num::integrate(surv_g, x1, hi);
    const double mid_xb_to_x1_gh = num::integrate(mid_gh, xb, x1);
    const double mid_xb_to_x1_g = num::integrate(mid_g, xb, x1);

    const int n = std::max(grid, 2);
    std::vector<double> c1(static_cast<std::size_t>(n)), qgh(static_cast<std::size_t>(n)),
        qg(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) {
        const double a = lo + (xb - lo) * static_cast<double>(i - 1) / (n - 1);
        const double b = lo + (xb - lo) * static_cast<double>(i) / (n - 1);
        c1[static_cast<std::size_t>(i)] =
            c1[static_cast<std::size_t>(i - 1)] + num::gauss_legendre_32(surv_gh, a, b);
        qgh[static_cast<std::size_t>(i)] =
            qgh[static_cast<std::size_t>(i - 1)] + num::gauss_legendre_32(mid_gh, a, b);
        qg[static_cast<std::size_t>(i)] =
            qg[static_cast<std::size_t>(i - 1)] + num::gauss_legendre_32(mid_g, a, b);
    }
    const double qgh_total = qgh[static_cast<std::size_t>(n - 1)];
    const double qg_total = qg[static_cast<std::size_t>(n - 1)];

    ScanBest best;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double u1 = c1[k] + (qgh_total - qgh[k]) + mid_xb_to_x1_gh + tail_gh;
        const double u2 = (qg_total - qg[k]) + mid_xb_to_x1_g + tail_g;
        const double u = p.alpha * u1 + (1.0 - p.alpha) * u2;
        if (u > best.u) {
            best.u = u;
            best.x0 = lo + (xb - lo) * static_cast<double>(i) / (n - 1);
        }
    }
    return best;
}

} // namespace

BestResponse best_response(const TwoStageProcess& p, int grid) {
    const Distribution& f = p.value_law;
    const double mp = f.monopoly_price();
    const double hi = f.hi();
    const double lo = f.lo();

    // Coarse grid over {x1 in [mp, hi]} x {x0 in [lo, xbar0(x1)]}.
    double best_u = -1e300, best_x0 = mp, best_x1 = mp;
    const int n1 = std::max(grid, 2);
    for (int j = 0; j < n1; ++j) {
        const double x1 = mp + (hi - mp) * static_cast<double>(j) / (n1 - 1);
        const ScanBest s = scan_x1_slice(p, x1, grid, mp);
        if (s.u > best_u) {
            best_u = s.u;
            best_x0 = s.x0;
            best_x1 = x1;
        }
    }

    // Projected-gradient polish with backtracking line search.
    double x0 = best_x0, x1 = best_x1;
    double u = utility_two_stage(x0, x1, p).u_total;
    double step = 0.1 * (hi - mp);
    for (int it = 0; it < 50; ++it) {
        const auto [g0, g1] = utility_grad(x0, x1, p);
        const double norm = std::hypot(g0, g1);
        if (norm < 1e-14) break;
        bool improved = false;
        for (int bt = 0; bt < 20; ++bt) {
            double nx1 = std::clamp(x1 + step * g1 / norm, mp, hi);
            const double xb = xbar0(f, f.revenue(nx1), mp);
            double nx0 = std::clamp(x0 + step * g0 / norm, lo, xb);
            const double nu = utility_two_stage(nx0, nx1, p).u_total;
            if (nu > u) {
                x0 = nx0;
                x1 = nx1;
                u = nu;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved || step < 1e-12 * (hi - lo)) break;
    }

    const UtilityBreakdown corner = truthful_two_stage(p);
    BestResponse out;
    if (corner.u_total >= u) {
        out.x0 = mp;
        out.x1 = mp;
        out.utility = corner;
        out.truthful = true;
    } else {
        out.x0 = x0;
        out.x1 = x1;
        out.utility = utility_two_stage(x0, x1, p);
        out.truthful = false;
    }
    return out;
}

double commitment_utility(double x1, const Distribution& g1, const Distribution& g2,
                          const Distribution& f, double alpha) {
    const double lo = f.lo();
    const double hi = f.hi();
    if (x1 < lo || x1 > hi) throw OutOfSupport("commitment_utility: x1 outside support");
    const double mp = f.monopoly_price();
    const double plateau = f.revenue(x1);
    auto t = [&](double x) { return plateau / (1.0 - f.cdf(x)); };
    auto mix = [&](double x) { return alpha * g1.cdf(x) + (1.0 - alpha) * g2.cdf(x); };

    if (x1 >= mp) {
        std::vector<double> inner = small_breaks(f);
        add_mapped_edge_breaks(inner, g1, f, plateau, lo, x1);
        add_mapped_edge_breaks(inner, g2, f, plateau, lo, x1);
        std::vector<double> outer = small_breaks(f);
        add_edge_breaks(outer, g1, x1, hi);
        add_edge_breaks(outer, g2, x1, hi);
        return num::integrate([&](double x) { return x * mix(t(x)) * f.pdf(x); }, lo, x1, inner) +
               num::integrate([&](double x) { return (1.0 - f.cdf(x)) * mix(x); }, x1, hi, outer);
    }
    // Below the monopoly price the seller reserves at psi^-1(0) in stage 2,
    // so the shading plateau only pays off in stage 1.
    std::vector<double> inner = small_breaks(f);
    add_mapped_edge_breaks(inner, g1, f, plateau, lo, x1);
    std::vector<double> outer = small_breaks(f);
    add_edge_breaks(outer, g1, lo, hi);
    add_edge_breaks(outer, g2, lo, hi);
    const double stage1 =
        num::integrate([&](double x) { return x * g1.cdf(t(x)) * f.pdf(x); }, lo, x1, inner) +
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g1.cdf(x); }, x1, hi, outer);
    const double stage2 =
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g2.cdf(x); }, mp, hi, outer);
    return alpha * stage1 + (1.0 - alpha) * stage2;
}

CommitmentJump commitment_discontinuity(const Distribution& g1, const Distribution& g2,
                                        const Distribution& f, double alpha) {
    const double mp = f.monopoly_price();
    CommitmentJump out;
    out.above = commitment_utility(mp, g1, g2, f, alpha);
    // Evaluate the below-branch formula exactly at the discontinuity point.
    const double lo = f.lo();
    const double hi = f.hi();
    const double plateau = f.revenue(mp);
    auto t = [&](double x) { return plateau / (1.0 - f.cdf(x)); };
    std::vector<double> inner = small_breaks(f);
    add_mapped_edge_breaks(inner, g1, f, plateau, lo, mp);
    const double stage1 =
        num::integrate([&](double x) { return x * g1.cdf(t(x)) * f.pdf(x); }, lo, mp, inner) +
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g1.cdf(x); }, mp, hi);
    const double stage2 = num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g2.cdf(x); }, mp, hi);
    out.below = alpha * stage1 + (1.0 - alpha) * stage2;
    return out;
}

namespace {

// I(r)/(r(1-F(r))) with I(r) = E[psi(X) G(r(1-F(r))/(1-F(X))) 1{X<=r}];
// normalizing keeps the function away from 0/0 near the upper support end.
double one_strategic_equation(double r, const Distribution& g, const Distribution& f) {
    const double plateau = f.revenue(r);
    if (plateau <= 0.0) return 0.0;
    std::vector<double> breaks = small_breaks(f);
    add_mapped_edge_breaks(breaks, g, f, plateau, f.lo(), r);
    const double value = num::integrate(
        [&](double x) { return psi_times_pdf(f, x) * g.cdf(plateau / (1.0 - f.cdf(x))); }, f.lo(),
        r, breaks);
    return value / plateau;
}

} // namespace

double one_strategic_threshold(const Distribution& g, const Distribution& f) {
    const double mp = f.monopoly_price();
    const double hi = f.hi();
    const double span = hi - mp;
    const double a = mp + 1e-9 * span;
    const double b = hi - 1e-9 * span;
    constexpr int kScan = 256;
    double prev_x = a;
    double prev_v = one_strategic_equation(a, g, f);
    for (int i = 1; i <= kScan; ++i) {
        const double x = a + span * static_cast<double>(i) / kScan;
        const double xx = std::min(x, b);
        const double v = one_strategic_equation(xx, g, f);
        if (prev_v < 0.0 && v >= 0.0) {
            return num::find_root([&](double r) { return one_strategic_equation(r, g, f); },
                                  prev_x, xx, 1e-10);
        }
        prev_x = xx;
        prev_v = v;
    }
    throw NoRoot("one_strategic_threshold: no sign change above the monopoly price");
}

namespace {

void require_regular(const Distribution& f, const char* who) {
    if (!check_quasi_regular(f).quasi_regular) {
        throw AssumptionViolated(std::string(who) + ": value law is not quasi-regular");
    }
}

double nash_equation(double r, int k, const Distribution& f) {
    std::vector<double> breaks = small_breaks(f);
    return num::integrate(
        [&](double x) { return psi_times_pdf(f, x) * std::pow(f.cdf(x), k - 1); }, f.lo(), r,
        breaks);
}

} // namespace

double nash_threshold(int k, const Distribution& f) {
    if (k < 2) throw AssumptionViolated("nash_threshold: need at least two bidders");
    require_regular(f, "nash_threshold");
    if (f.pdf(f.hi()) <= 0.0) {
        throw AssumptionViolated("nash_threshold: density vanishes at the upper support end");
    }
    const double mp = f.monopoly_price();
    const double lo_bracket = mp;
    const double hi_bracket = f.hi();
    if (!(nash_equation(lo_bracket, k, f) < 0.0) || !(nash_equation(hi_bracket, k, f) > 0.0)) {
        throw AssumptionViolated("nash_threshold: equation has no bracketed root");
    }
    return num::find_root([&](double r) { return nash_equation(r, k, f); }, lo_bracket, hi_bracket,
                          1e-10);
}

NashReport nash_report(int k, const Distribution& f) {
    NashReport rep;
    rep.k = k;
    rep.r_star = nash_threshold(k, f);
    const double lo = f.lo();
    const double hi = f.hi();
    auto fk = [&](double x) { return std::pow(f.cdf(x), k - 1); };
    const auto breaks = small_breaks(f);
    rep.seller_revenue =
        num::integrate([&](double x) { return psi_times_pdf(f, x) * fk(x); }, rep.r_star, hi, breaks);
    rep.no_reserve_revenue =
        num::integrate([&](double x) { return psi_times_pdf(f, x) * fk(x); }, lo, hi, breaks);
    rep.buyer_utility =
        num::integrate([&](double x) { return x * fk(x) * f.pdf(x); }, lo, rep.r_star, breaks) +
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * fk(x); }, rep.r_star, hi, breaks);
    rep.no_reserve_utility =
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * fk(x); }, lo, hi, breaks);
    try {
        rep.alpha_c_thresh =
            critical_alpha(equilibrium_competition(rep.r_star, k, f), f).alpha_c;
    } catch (const NoCrossing&) {
    }
    try {
        rep.alpha_c_truthful = critical_alpha(power_of_cdf(f, k - 1), f).alpha_c;
    } catch (const NoCrossing&) {
    }
    return rep;
}

Distribution equilibrium_competition(double r_star, int k, const Distribution& f) {
    if (k < 2) throw AssumptionViolated("equilibrium_competition: need at least two bidders");
    const double plateau = f.revenue(r_star);
    const double hi = f.hi();
    std::vector<std::array<double, 2>> knots;
    // Geometric spacing on the plateau keeps the interpolation error of
    // (1 - plateau/x)^{K-1} below ~1e-9 near the steep left edge.
    const int n_plateau = 20000;
    const int n_tail = 10000;
    knots.reserve(static_cast<std::size_t>(n_plateau + n_tail) + 2);
    const double ratio = r_star / plateau;
    for (int i = 0; i <= n_plateau; ++i) {
        const double x = plateau * std::pow(ratio, static_cast<double>(i) / n_plateau);
        knots.push_back({x, std::pow(1.0 - plateau / x, k - 1)});
    }
    for (int i = 1; i <= n_tail; ++i) {
        const double x = r_star + (hi - r_star) * static_cast<double>(i) / n_tail;
        knots.push_back({x, std::pow(f.cdf(x), k - 1)});
    }
    knots.front()[1] = 0.0;
    knots.back()[1] = 1.0;
    return Distribution::piecewise_empirical(std::move(knots));
}

PhaseReport critical_alpha(const Distribution& g, const Distribution& f) {
    const double lo = f.lo();
    const double hi = f.hi();
    const double mp = f.monopoly_price();
    std::vector<double> breaks = small_breaks(f);
    add_edge_breaks(breaks, g, lo, hi);
    // U(0; alpha) = alpha*A + (1-alpha)*B is the truthful two-stage utility.
    const double a_full =
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); }, lo, hi, breaks);
    const double b_tail =
        num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); }, mp, hi, breaks);

    // The optimal thresholding utility does not depend on alpha when the two
    // phase competitions coincide.
    const int n = 1000;
    double best_arg = mp, best_val = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double x1 = mp + (hi - mp) * static_cast<double>(i) / n;
        const double v = threshold_utility(x1, g, f);
        if (v > best_val) {
            best_val = v;
            best_arg = x1;
        }
    }
    const double span = (hi - mp) / n;
    const double refined = num::golden_max([&](double x1) { return threshold_utility(x1, g, f); },
                                           std::max(mp, best_arg - span),
                                           std::min(hi, best_arg + span), 1e-10);
    const double u_star = std::max(best_val, threshold_utility(refined, g, f));

    auto u0 = [&](double alpha) { return alpha * a_full + (1.0 - alpha) * b_tail; };
    if (u0(0.0) >= u_star) throw NoCrossing("critical_alpha: thresholding never helps");
    if (u0(1.0) <= u_star) throw NoCrossing("critical_alpha: truthful never overtakes");
    const double alpha_c =
        num::find_root([&](double alpha) { return u0(alpha) - u_star; }, 0.0, 1.0, 1e-8);
    PhaseReport rep;
    rep.alpha_c = alpha_c;
    rep.u_truthful_at_alpha_c = u0(alpha_c);
    rep.u_threshold_at_alpha_c = u_star;
    return rep;
}

double threshold_utility(double r, const Distribution& g, const Distribution& f) {
    const double lo = f.lo();
    const double hi = f.hi();
    const double plateau = f.revenue(r);
    std::vector<double> inner = small_breaks(f);
    add_mapped_edge_breaks(inner, g, f, plateau, lo, r);
    std::vector<double> outer = small_breaks(f);
    add_edge_breaks(outer, g, r, hi);
    return num::integrate(
               [&](double x) { return x * g.cdf(plateau / (1.0 - f.cdf(x))) * f.pdf(x); }, lo, r,
               inner) +
           num::integrate([&](double x) { return (1.0 - f.cdf(x)) * g.cdf(x); }, r, hi, outer);
}

double worst_case_threshold(int k_max, const Distribution& f) {
    if (k_max < 2) throw AssumptionViolated("worst_case_threshold: need k_max >= 2");
    require_regular(f, "worst_case_threshold");
    const double mp = f.monopoly_price();
    const double hi = f.hi();
    auto utility_at = [&](double r, int k) {
        const double plateau = f.revenue(r);
        auto gk = [&](double x) { return std::pow(f.cdf(x), k - 1); };
        return num::integrate(
                   [&](double x) { return x * gk(plateau / (1.0 - f.cdf(x))) * f.pdf(x); }, f.lo(),
                   r, {}, 1e-11) +
               num::integrate([&](double x) { return (1.0 - f.cdf(x)) * gk(x); }, r, hi, {}, 1e-11);
    };
    auto worst = [&](double r) {
        double w = 1e300;
        for (int k = 2; k <= k_max; ++k) w = std::min(w, utility_at(r, k));
        return w;
    };
    const int n = 400;
    double best_arg = mp, best_val = -1e300;
    for (int i = 0; i <= n; ++i) {
        const double r = mp + (hi - mp) * static_cast<double>(i) / n;
        const double v = worst(r);
        if (v > best_val) {
            best_val = v;
            best_arg = r;
        }
    }
    const double span = (hi - mp) / n;
    return num::golden_max(worst, std::max(mp, best_arg - span), std::min(hi, best_arg + span),
                           1e-8);
}

} // namespace auctionlab
