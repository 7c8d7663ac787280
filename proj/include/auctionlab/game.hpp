#pragma once

#include "auctionlab/distribution.hpp"
#include "auctionlab/strategy.hpp"

#include <optional>
#include <utility>

namespace auctionlab {

/// Two-stage exploration/exploitation process faced by the strategic bidder:
/// competition G (cdf of the highest competing bid), an optional random
/// reserve law H in stage 1, the bidder's value law F, and the stage weight
/// alpha (stage-1 share of the objective alpha*U1 + (1-alpha)*U2).
struct TwoStageProcess {
    Distribution competition;
    std::optional<Distribution> phase1_reserve; // H; nullopt means no reserve
    Distribution value_law;
    double alpha = 0.0;
};

struct UtilityBreakdown {
    double u1 = 0.0;      // stage-1 expected utility
    double u2 = 0.0;      // stage-2 expected utility
    double u_total = 0.0; // alpha*u1 + (1-alpha)*u2
    double m1 = 0.0;      // stage-1 expected payment
    double m2 = 0.0;      // stage-2 expected payment
    double reserve_value = 0.0;
};

/// Expected payment E[psi_B(B) G(B) 1{B >= r}] of a bidder playing s against
/// competition cdf g and reserve price r (integrated Myerson lemma).
double myerson_payment(const Strategy& s, const Distribution& g, double r);

/// Utility of the double-threshold strategy (x0,x1) in the two-stage process,
/// with the welfare-benevolent seller reacting to the committed bid law
/// (reserve value x0). x0 == x1 means truthful play, against which the seller
/// reserves at the monopoly price.
UtilityBreakdown utility_two_stage(double x0, double x1, const TwoStageProcess& p);

/// Analytic (d/dx0, d/dx1) of the total two-stage utility.
std::pair<double, double> utility_grad(double x0, double x1, const TwoStageProcess& p);

struct BestResponse {
    double x0 = 0.0;
    double x1 = 0.0;
    UtilityBreakdown utility;
    bool truthful = false;
};

/// Maximizes utility_two_stage over {0 <= x0 <= xbar0(x1), x1 >= monopoly
/// price} by a coarse grid scan and projected-gradient polish, then compares
/// against the truthful corner.
BestResponse best_response(const TwoStageProcess& p, int grid = 200);

/// Utility of the pure thresholding strategy (x0 = 0) at threshold x1 when
/// the bidder commits, phase competitions being g1 and g2. Piecewise in x1
/// with a discontinuity at the monopoly price.
double commitment_utility(double x1, const Distribution& g1, const Distribution& g2,
                          const Distribution& f, double alpha);

/// Both one-sided values of the commitment utility at x1 = psi^-1(0).
struct CommitmentJump {
    double below = 0.0;
    double above = 0.0;
};
CommitmentJump commitment_discontinuity(const Distribution& g1, const Distribution& g2,
                                        const Distribution& f, double alpha);

/// Unique non-trivial root r of E[psi(X) G(r(1-F(r))/(1-F(X))) 1{X<=r}] = 0
/// on (psi^-1(0), hi): the optimal threshold of a single strategic bidder
/// against fixed competition g. Throws NoRoot when no sign change exists
/// (truthful is then the best response).
double one_strategic_threshold(const Distribution& g, const Distribution& f);

/// Symmetric all-strategic equilibrium threshold: unique non-zero root of
/// E[psi(X) F^{K-1}(X) 1{X<=r}] = 0.
double nash_threshold(int k, const Distribution& f);

struct NashReport {
    int k = 0;
    double r_star = 0.0;
    double seller_revenue = 0.0;    // per buyer, at the equilibrium
    double buyer_utility = 0.0;     // per buyer, at the equilibrium
    double no_reserve_revenue = 0.0;
    double no_reserve_utility = 0.0;
    /// Critical stage weights of the two-stage equilibria (Theorem's
    /// alpha_c,thresh / alpha_c,truthful); unset when degenerate.
    std::optional<double> alpha_c_thresh;
    std::optional<double> alpha_c_truthful;
};
NashReport nash_report(int k, const Distribution& f);

/// Closed-form cdf of the highest competing bid when the K-1 others play the
/// equilibrium threshold strategy at r_star:
///   0                                  below r*(1-F(r*)),
///   (1 - r*(1-F(r*))/x)^{K-1}          on [r*(1-F(r*)), r*],
///   F^{K-1}(x)                         above r*.
/// Returned as a dense piecewise-linear Distribution.
Distribution equilibrium_competition(double r_star, int k, const Distribution& f);

struct PhaseReport {
    double alpha_c = 0.0;
    double u_truthful_at_alpha_c = 0.0;
    double u_threshold_at_alpha_c = 0.0;
};

/// Critical alpha at which truthful bidding overtakes optimal thresholding
/// (same competition g in both phases, no stage-1 reserve). Throws NoCrossing
/// when thresholding never helps or never stops helping on [0,1].
PhaseReport critical_alpha(const Distribution& g, const Distribution& f);

/// Maximin threshold over an unknown bidder count: argmax over r of
/// min_{2<=K<=k_max} U(threshold r against K-1 symmetric truthful bidders).
double worst_case_threshold(int k_max, const Distribution& f);

/// One-strategic utility of thresholding at r against competition g (alpha=0
/// exploitation game); shared by worst_case_threshold and the mech module.
double threshold_utility(double r, const Distribution& g, const Distribution& f);

} // namespace auctionlab
