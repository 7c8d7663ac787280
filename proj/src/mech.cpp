#include "auctionlab/mech.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/game.hpp"
#include "auctionlab/numeric.hpp"

#include <cmath>

namespace auctionlab {

namespace {

void require_symmetric_regular(int k, const Distribution& f, const char* who) {
    if (k < 2) throw AssumptionViolated(std::string(who) + ": need at least two bidders");
    if (!check_quasi_regular(f).quasi_regular) {
        throw AssumptionViolated(std::string(who) + ": value law is not quasi-regular");
    }
}

// Shared truthful benchmark: lazy second price with monopoly reserve, which
// coincides with the Myerson auction in the symmetric truthful case.
double truthful_utility(int k, const Distribution& f, double mp) {
    return num::integrate(
        [&](double x) { return (1.0 - f.cdf(x)) * std::pow(f.cdf(x), k - 1); }, mp, f.hi(),
        f.interior_breakpoints());
}

// E[X 1{X <= mp}]
double mean_below(const Distribution& f, double mp) {
    return num::integrate([&](double x) { return x * f.pdf(x); }, f.lo(), mp,
                          f.interior_breakpoints());
}

} // namespace

std::string mechanism_name(Mechanism m) {
    switch (m) {
    case Mechanism::Lazy:
        return "lazy";
    case Mechanism::Myerson:
        return "myerson";
    case Mechanism::Eager:
        return "eager";
    }
    return "?";
}

std::pair<double, double> myerson_utilities(int k, const Distribution& f) {
    require_symmetric_regular(k, f, "myerson_utilities");
    const double mp = f.monopoly_price();
    const double truthful = truthful_utility(k, f, mp);
    const double extra = std::pow(f.cdf(mp), k - 1) * mean_below(f, mp);
    return {truthful, truthful + extra};
}

std::pair<double, double> lazy_utilities(int k, const Distribution& f) {
    require_symmetric_regular(k, f, "lazy_utilities");
    const double mp = f.monopoly_price();
    const double truthful = truthful_utility(k, f, mp);
    const double plateau = f.revenue(mp);
    const double extra = num::integrate(
        [&](double x) {
            const double t0 = plateau / (1.0 - f.cdf(x));
            return x * std::pow(f.cdf(t0), k - 1) * f.pdf(x);
        },
        f.lo(), mp, f.interior_breakpoints());
    return {truthful, truthful + extra};
}

std::pair<double, double> eager_utilities(int k, const Distribution& f) {
    require_symmetric_regular(k, f, "eager_utilities");
    const double mp = f.monopoly_price();
    const double truthful = truthful_utility(k, f, mp);
    // Below the monopoly price no truthful opponent clears her reserve, so
    // the strategic bidder faces the constant competition F^{K-1}(mp).
    const double extra = std::pow(f.cdf(mp), k - 1) * mean_below(f, mp);
    return {truthful, truthful + extra};
}

std::vector<MechanismComparison> compare_all(int k, const Distribution& f, bool thresholding) {
    std::vector<MechanismComparison> rows;
    const auto push = [&](Mechanism m, std::pair<double, double> u) {
        MechanismComparison row;
        row.mechanism = m;
        row.u_truthful = u.first;
        row.u_threshold = thresholding ? u.second : u.first;
        row.uplift_abs = row.u_threshold - row.u_truthful;
        row.uplift_rel = row.u_truthful != 0.0 ? row.uplift_abs / row.u_truthful : 0.0;
        rows.push_back(row);
    };
    push(Mechanism::Lazy, lazy_utilities(k, f));
    push(Mechanism::Myerson, myerson_utilities(k, f));
    push(Mechanism::Eager, eager_utilities(k, f));
    const double lazy_uplift = rows[0].uplift_abs;
    if (rows[1].uplift_abs < lazy_uplift - 1e-9 || rows[2].uplift_abs < lazy_uplift - 1e-9) {
        throw AssumptionViolated("compare_all: mechanism uplift ordering violated");
    }
    return rows;
}

} // namespace auctionlab
