#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "auctionlab/distribution.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/game.hpp"
#include "auctionlab/mech.hpp"
#include "auctionlab/oracle.hpp"
#include "auctionlab/seller.hpp"
#include "auctionlab/strategy.hpp"

#include <optional>

namespace py = pybind11;
using namespace auctionlab;

namespace {

SimMechanism mechanism_from_string(const std::string& name) {
    if (name == "lazy") return SimMechanism::LazySecondPrice;
    if (name == "eager") return SimMechanism::Eager;
    if (name == "myerson") return SimMechanism::Myerson;
    throw ConfigInvalid("unknown mechanism: " + name);
}

ReserveRule reserve_rule_from_string(const std::string& name, double price) {
    if (name == "fixed") return {ReserveRule::Kind::FixedPrice, price};
    if (name == "monopoly_of_bids") return {ReserveRule::Kind::MonopolyOfBids, 0.0};
    if (name == "monopoly_of_values") return {ReserveRule::Kind::MonopolyOfValues, 0.0};
    throw ConfigInvalid("unknown reserve rule: " + name);
}

SimConfig make_config(long n_auctions, std::uint64_t seed, const std::string& mechanism,
                      const std::vector<Strategy>& strategies, const std::string& reserve_rule,
                      double reserve_price, const std::optional<Distribution>& phase1_reserve) {
    SimConfig c;
    c.n_auctions = n_auctions;
    c.seed = seed;
    c.mechanism = mechanism_from_string(mechanism);
    c.strategies = strategies;
    c.reserve_rule = reserve_rule_from_string(reserve_rule, reserve_price);
    c.phase1_reserve = phase1_reserve;
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "auctionlab: strategic bidding in two-stage repeated auctions";

    py::register_exception<Error>(m, "AuctionError");

    py::class_<Distribution>(m, "Distribution")
        .def_static("uniform", &Distribution::uniform, py::arg("a"), py::arg("b"))
        .def_static("exponential", &Distribution::exponential, py::arg("rate"),
                    py::arg("upper") = std::nullopt)
        .def_static("truncated_lognormal", &Distribution::truncated_lognormal, py::arg("mu"),
                    py::arg("sigma"), py::arg("lower") = 0.0, py::arg("upper") = std::nullopt)
        .def_static("piecewise_empirical", &Distribution::piecewise_empirical, py::arg("knots"))
        .def_property_readonly("lo", &Distribution::lo)
        .def_property_readonly("hi", &Distribution::hi)
        .def("cdf", &Distribution::cdf)
        .def("pdf", &Distribution::pdf)
        .def("quantile", &Distribution::quantile)
        .def("psi", &Distribution::psi)
        .def("hazard", &Distribution::hazard)
        .def("revenue", &Distribution::revenue)
        .def("monopoly_price", &Distribution::monopoly_price)
        .def("psi_inverse", &Distribution::psi_inverse);

    m.def("check_quasi_regular", [](const Distribution& d) {
        const auto rep = check_quasi_regular(d);
        return py::make_tuple(rep.quasi_regular, rep.violations);
    });
    m.def("power_of_cdf", &power_of_cdf, py::arg("d"), py::arg("power"),
          py::arg("n_knots") = 20001);

    py::class_<Strategy>(m, "Strategy")
        .def_static("truthful", &Strategy::truthful, py::arg("base"))
        .def_static("double_threshold", &Strategy::double_threshold, py::arg("base"),
                    py::arg("x0"), py::arg("x1"))
        .def_static("eps_threshold", &Strategy::eps_threshold, py::arg("base"), py::arg("r"),
                    py::arg("eps"))
        .def("bid", &Strategy::bid)
        .def("bid_virtual_value", &Strategy::bid_virtual_value)
        .def("perceived_virtual_value", &Strategy::perceived_virtual_value, py::arg("alt"),
             py::arg("x"))
        .def("inverse_bid", &Strategy::inverse_bid)
        .def_property_readonly("base", &Strategy::base);

    py::class_<BidDistribution>(m, "BidDistribution")
        .def_property_readonly("lo", &BidDistribution::lo)
        .def_property_readonly("hi", &BidDistribution::hi)
        .def("cdf", &BidDistribution::cdf)
        .def("pdf", &BidDistribution::pdf)
        .def("quantile", &BidDistribution::quantile)
        .def("revenue", &BidDistribution::revenue);
    m.def("pushforward", &pushforward);

    py::class_<ReserveDecision>(m, "ReserveDecision")
        .def_readonly("reserve_price", &ReserveDecision::reserve_price)
        .def_readonly("reserve_value", &ReserveDecision::reserve_value)
        .def_readonly("attained_revenue", &ReserveDecision::attained_revenue);
    m.def("optimal_reserve", &optimal_reserve);
    m.def("erm_reserve", [](const std::vector<double>& bids) { return erm_reserve(bids); });

    py::class_<ErmReport>(m, "ErmReport")
        .def_readonly("n", &ErmReport::n)
        .def_readonly("eps", &ErmReport::eps)
        .def_readonly("delta", &ErmReport::delta)
        .def_readonly("delta1", &ErmReport::delta1)
        .def_readonly("x_hat", &ErmReport::x_hat)
        .def_readonly("x_max", &ErmReport::x_max)
        .def_readonly("c_n", &ErmReport::c_n)
        .def_readonly("bound", &ErmReport::bound)
        .def_readonly("hit", &ErmReport::hit);
    m.def(
        "erm_theorem5_experiment",
        [](const Distribution& d, double r, double eta, const std::vector<long>& n_grid,
           double delta, int trials, std::uint64_t seed, bool eps_zero_control) {
            return erm_theorem5_experiment(d, r, eta, n_grid, delta, trials, seed,
                                           eps_zero_control);
        },
        py::arg("d"), py::arg("r"), py::arg("eta"), py::arg("n_grid"), py::arg("delta"),
        py::arg("trials"), py::arg("seed"), py::arg("eps_zero_control") = false);

    py::class_<UtilityBreakdown>(m, "UtilityBreakdown")
        .def_readonly("u1", &UtilityBreakdown::u1)
        .def_readonly("u2", &UtilityBreakdown::u2)
        .def_readonly("u_total", &UtilityBreakdown::u_total)
        .def_readonly("m1", &UtilityBreakdown::m1)
        .def_readonly("m2", &UtilityBreakdown::m2)
        .def_readonly("reserve_value", &UtilityBreakdown::reserve_value);

    py::class_<BestResponse>(m, "BestResponse")
        .def_readonly("x0", &BestResponse::x0)
        .def_readonly("x1", &BestResponse::x1)
        .def_readonly("utility", &BestResponse::utility)
        .def_readonly("truthful", &BestResponse::truthful);

    py::class_<NashReport>(m, "NashReport")
        .def_readonly("k", &NashReport::k)
        .def_readonly("r_star", &NashReport::r_star)
        .def_readonly("seller_revenue", &NashReport::seller_revenue)
        .def_readonly("buyer_utility", &NashReport::buyer_utility)
        .def_readonly("no_reserve_revenue", &NashReport::no_reserve_revenue)
        .def_readonly("no_reserve_utility", &NashReport::no_reserve_utility)
        .def_readonly("alpha_c_thresh", &NashReport::alpha_c_thresh)
        .def_readonly("alpha_c_truthful", &NashReport::alpha_c_truthful);

    py::class_<PhaseReport>(m, "PhaseReport")
        .def_readonly("alpha_c", &PhaseReport::alpha_c)
        .def_readonly("u_truthful_at_alpha_c", &PhaseReport::u_truthful_at_alpha_c)
        .def_readonly("u_threshold_at_alpha_c", &PhaseReport::u_threshold_at_alpha_c);

    auto process = [](const Distribution& g, const std::optional<Distribution>& h,
                      const Distribution& f, double alpha) {
        return TwoStageProcess{g, h, f, alpha};
    };
    m.def(
        "myerson_payment",
        [](const Strategy& s, const Distribution& g, double r) { return myerson_payment(s, g, r); },
        py::arg("strategy"), py::arg("competition"), py::arg("reserve"));
    m.def(
        "utility_two_stage",
        [process](double x0, double x1, const Distribution& g, const std::optional<Distribution>& h,
                  const Distribution& f, double alpha) {
            return utility_two_stage(x0, x1, process(g, h, f, alpha));
        },
        py::arg("x0"), py::arg("x1"), py::arg("competition"), py::arg("phase1_reserve"),
        py::arg("value_law"), py::arg("alpha"));
    m.def(
        "utility_grad",
        [process](double x0, double x1, const Distribution& g, const std::optional<Distribution>& h,
                  const Distribution& f, double alpha) {
            return utility_grad(x0, x1, process(g, h, f, alpha));
        },
        py::arg("x0"), py::arg("x1"), py::arg("competition"), py::arg("phase1_reserve"),
        py::arg("value_law"), py::arg("alpha"));
    m.def(
        "best_response",
        [process](const Distribution& g, const std::optional<Distribution>& h,
                  const Distribution& f, double alpha, int grid) {
            return best_response(process(g, h, f, alpha), grid);
        },
        py::arg("competition"), py::arg("phase1_reserve"), py::arg("value_law"), py::arg("alpha"),
        py::arg("grid") = 200);
    m.def("commitment_utility", &commitment_utility, py::arg("x1"), py::arg("g1"), py::arg("g2"),
          py::arg("value_law"), py::arg("alpha"));
    m.def("one_strategic_threshold", &one_strategic_threshold, py::arg("competition"),
          py::arg("value_law"));
    m.def("nash_threshold", &nash_threshold, py::arg("k"), py::arg("value_law"));
    m.def("nash_report", &nash_report, py::arg("k"), py::arg("value_law"));
    m.def("equilibrium_competition", &equilibrium_competition, py::arg("r_star"), py::arg("k"),
          py::arg("value_law"));
    m.def("critical_alpha", &critical_alpha, py::arg("competition"), py::arg("value_law"));
    m.def("worst_case_threshold", &worst_case_threshold, py::arg("k_max"), py::arg("value_law"));
    m.def("threshold_utility", &threshold_utility, py::arg("r"), py::arg("competition"),
          py::arg("value_law"));

    py::class_<MechanismComparison>(m, "MechanismComparison")
        .def_property_readonly("mechanism",
                               [](const MechanismComparison& mc) { return mechanism_name(mc.mechanism); })
        .def_readonly("u_truthful", &MechanismComparison::u_truthful)
        .def_readonly("u_threshold", &MechanismComparison::u_threshold)
        .def_readonly("uplift_abs", &MechanismComparison::uplift_abs)
        .def_readonly("uplift_rel", &MechanismComparison::uplift_rel);
    m.def("myerson_utilities", &myerson_utilities, py::arg("k"), py::arg("value_law"));
    m.def("lazy_utilities", &lazy_utilities, py::arg("k"), py::arg("value_law"));
    m.def("eager_utilities", &eager_utilities, py::arg("k"), py::arg("value_law"));
    m.def("compare_all", &compare_all, py::arg("k"), py::arg("value_law"),
          py::arg("thresholding") = true);

    py::class_<BidderStats>(m, "BidderStats")
        .def_readonly("mean_utility", &BidderStats::mean_utility)
        .def_readonly("se_utility", &BidderStats::se_utility)
        .def_readonly("mean_payment", &BidderStats::mean_payment)
        .def_readonly("se_payment", &BidderStats::se_payment)
        .def_readonly("win_rate", &BidderStats::win_rate)
        .def_readonly("mean_gross", &BidderStats::mean_gross)
        .def_readonly("reserve_price", &BidderStats::reserve_price);
    py::class_<SimResult>(m, "SimResult")
        .def_readonly("bidders", &SimResult::bidders)
        .def_readonly("n_auctions", &SimResult::n_auctions);
    py::class_<TwoStageResult>(m, "TwoStageResult")
        .def_readonly("phase1", &TwoStageResult::phase1)
        .def_readonly("phase2", &TwoStageResult::phase2)
        .def_readonly("alpha", &TwoStageResult::alpha)
        .def_readonly("combined_utility", &TwoStageResult::combined_utility)
        .def_readonly("learned_reserves", &TwoStageResult::learned_reserves);

    m.def(
        "simulate",
        [](long n_auctions, std::uint64_t seed, const std::string& mechanism,
           const std::vector<Strategy>& strategies, const std::string& reserve_rule,
           double reserve_price, const std::optional<Distribution>& phase1_reserve) {
            return simulate(make_config(n_auctions, seed, mechanism, strategies, reserve_rule,
                                        reserve_price, phase1_reserve));
        },
        py::arg("n_auctions"), py::arg("seed"), py::arg("mechanism"), py::arg("strategies"),
        py::arg("reserve_rule") = "fixed", py::arg("reserve_price") = 0.0,
        py::arg("phase1_reserve") = std::nullopt);
    m.def(
        "simulate_two_stage",
        [](long n_auctions, std::uint64_t seed, const std::string& mechanism,
           const std::vector<Strategy>& strategies, double alpha, const std::string& reserve_rule,
           double reserve_price, const std::optional<Distribution>& phase1_reserve) {
            return simulate_two_stage(make_config(n_auctions, seed, mechanism, strategies,
                                                  reserve_rule, reserve_price, phase1_reserve),
                                      alpha);
        },
        py::arg("n_auctions"), py::arg("seed"), py::arg("mechanism"), py::arg("strategies"),
        py::arg("alpha"), py::arg("reserve_rule") = "monopoly_of_bids",
        py::arg("reserve_price") = 0.0, py::arg("phase1_reserve") = std::nullopt);
}
