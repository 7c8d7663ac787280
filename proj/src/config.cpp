#include "auctionlab/config.hpp"

#include "auctionlab/errors.hpp"
#include "auctionlab/game.hpp"
#include "auctionlab/mech.hpp"
#include "auctionlab/seller.hpp"
#include "auctionlab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace auctionlab::lab {

void validate_keys(const json& j, const char* where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional) {
    if (!j.is_object()) throw ConfigInvalid(std::string(where) + ": expected a JSON object");
    for (const char* key : required) {
        if (!j.contains(key)) {
            throw ConfigInvalid(std::string(where) + ": missing required key '" + key + "'");
        }
    }
    for (const auto& [key, value] : j.items()) {
        const auto known = [&](std::initializer_list<const char*> list) {
            return std::any_of(list.begin(), list.end(),
                               [&](const char* k) { return key == k; });
        };
        if (!known(required) && !known(optional)) {
            throw ConfigInvalid(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

namespace {

double require_number(const json& j, const char* where, const char* key) {
    if (!j.at(key).is_number()) {
        throw ConfigInvalid(std::string(where) + ": '" + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

} // namespace

Distribution distribution_from_json(const json& j) {
    validate_keys(j, "distribution", {"family", "params"}, {});
    const std::string family = j.at("family").get<std::string>();
    const json& p = j.at("params");
    if (family == "uniform") {
        validate_keys(p, "uniform params", {"a", "b"}, {});
        return Distribution::uniform(require_number(p, "uniform", "a"),
                                     require_number(p, "uniform", "b"));
    }
    if (family == "exponential") {
        validate_keys(p, "exponential params", {"rate"}, {"upper"});
        std::optional<double> upper;
        if (p.contains("upper")) upper = require_number(p, "exponential", "upper");
        return Distribution::exponential(require_number(p, "exponential", "rate"), upper);
    }
    if (family == "truncated_lognormal") {
        validate_keys(p, "truncated_lognormal params", {"mu", "sigma"}, {"lower", "upper"});
        const double lower = p.contains("lower") ? require_number(p, "lognormal", "lower") : 0.0;
        std::optional<double> upper;
        if (p.contains("upper")) upper = require_number(p, "lognormal", "upper");
        return Distribution::truncated_lognormal(require_number(p, "lognormal", "mu"),
                                                 require_number(p, "lognormal", "sigma"), lower,
                                                 upper);
    }
    if (family == "piecewise_empirical") {
        validate_keys(p, "piecewise_empirical params", {"knots"}, {});
        std::vector<std::array<double, 2>> knots;
        for (const auto& row : p.at("knots")) {
            if (!row.is_array() || row.size() != 2) {
                throw ConfigInvalid("piecewise_empirical: each knot must be [x, cdf]");
            }
            knots.push_back({row[0].get<double>(), row[1].get<double>()});
        }
        return Distribution::piecewise_empirical(std::move(knots));
    }
    throw ConfigInvalid("distribution: unknown family '" + family + "'");
}

json distribution_to_json(const Distribution& d) {
    json out;
    switch (d.family()) {
    case Family::Uniform: {
        const auto& p = d.uniform_params();
        out = {{"family", "uniform"}, {"params", {{"a", p.a}, {"b", p.b}}}};
        break;
    }
    case Family::Exponential: {
        const auto& p = d.exponential_params();
        json params = {{"rate", p.rate}};
        if (p.upper_explicit) params["upper"] = p.upper;
        out = {{"family", "exponential"}, {"params", params}};
        break;
    }
    case Family::TruncatedLogNormal: {
        const auto& p = d.lognormal_params();
        json params = {{"mu", p.mu}, {"sigma", p.sigma}};
        if (p.lower_explicit) params["lower"] = p.lower;
        if (p.upper_explicit) params["upper"] = p.upper;
        out = {{"family", "truncated_lognormal"}, {"params", params}};
        break;
    }
    case Family::PiecewiseEmpirical: {
        json knots = json::array();
        for (const auto& k : d.knots()) knots.push_back({k[0], k[1]});
        out = {{"family", "piecewise_empirical"}, {"params", {{"knots", knots}}}};
        break;
    }
    }
    return out;
}

Strategy strategy_from_json(const json& j, Distribution base) {
    validate_keys(j, "strategy", {"kind"}, {"x0", "x1", "r", "eps"});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "truthful") {
        validate_keys(j, "truthful strategy", {"kind"}, {});
        return Strategy::truthful(std::move(base));
    }
    if (kind == "double_threshold") {
        validate_keys(j, "double_threshold strategy", {"kind", "x0", "x1"}, {});
        return Strategy::double_threshold(std::move(base), require_number(j, "strategy", "x0"),
                                          require_number(j, "strategy", "x1"));
    }
    if (kind == "eps_threshold") {
        validate_keys(j, "eps_threshold strategy", {"kind", "r", "eps"}, {});
        return Strategy::eps_threshold(std::move(base), require_number(j, "strategy", "r"),
                                       require_number(j, "strategy", "eps"));
    }
    throw ConfigInvalid("strategy: unknown kind '" + kind + "'");
}

json strategy_to_json(const Strategy& s) {
    switch (s.kind()) {
    case StrategyKind::Truthful:
        return {{"kind", "truthful"}};
    case StrategyKind::DoubleThreshold:
        return {{"kind", "double_threshold"}, {"x0", s.x0()}, {"x1", s.x1()}};
    case StrategyKind::EpsThreshold:
        return {{"kind", "eps_threshold"}, {"r", s.r()}, {"eps", s.eps()}};
    }
    throw ConfigInvalid("strategy_to_json: bad kind");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::vector<double> alpha_grid_from_json(const json& config) {
    std::vector<double> alphas;
    if (!config.contains("alpha_grid")) {
        for (int i = 0; i < 41; ++i) alphas.push_back(static_cast<double>(i) / 40.0);
        return alphas;
    }
    const json& g = config.at("alpha_grid");
    if (g.is_array()) {
        for (const auto& a : g) alphas.push_back(a.get<double>());
    } else {
        validate_keys(g, "alpha_grid", {"start", "stop", "count"}, {});
        const double start = g.at("start").get<double>();
        const double stop = g.at("stop").get<double>();
        const int count = g.at("count").get<int>();
        if (count < 1) throw ConfigInvalid("alpha_grid: count must be >= 1");
        for (int i = 0; i < count; ++i) {
            alphas.push_back(count == 1 ? start
                                        : start + (stop - start) * static_cast<double>(i) /
                                              (count - 1));
        }
    }
    if (alphas.empty()) throw ConfigInvalid("alpha_grid: empty");
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigInvalid("alpha_grid: alpha outside [0,1]");
    }
    return alphas;
}

} // namespace

std::string cmd_best_response(const json& config) {
    validate_keys(config, "best-response config", {"value_law", "competition"},
                  {"phase1_reserve", "alpha_grid", "search_grid"});
    const Distribution f = distribution_from_json(config.at("value_law"));
    const Distribution g = distribution_from_json(config.at("competition"));
    const Distribution h = config.contains("phase1_reserve")
                               ? distribution_from_json(config.at("phase1_reserve"))
                               : Distribution::uniform(f.lo(), f.hi());
    const int grid = config.contains("search_grid") ? config.at("search_grid").get<int>() : 200;
    if (grid < 2) throw ConfigInvalid("best-response: search_grid must be >= 2");
    const std::vector<double> alphas = alpha_grid_from_json(config);

    std::ostringstream csv;
    csv << "phase1_reserve,alpha,x0_star,x1_star,u1,u2,u_total,m1,m2\n";
    for (int with_reserve = 0; with_reserve < 2; ++with_reserve) {
        for (double alpha : alphas) {
            TwoStageProcess p{g, with_reserve ? std::optional<Distribution>(h) : std::nullopt, f,
                              alpha};
            const BestResponse br = best_response(p, grid);
            csv << (with_reserve ? "uniform" : "none") << ',' << format_number(alpha) << ','
                << format_number(br.x0) << ',' << format_number(br.x1) << ','
                << format_number(br.utility.u1) << ',' << format_number(br.utility.u2) << ','
                << format_number(br.utility.u_total) << ',' << format_number(br.utility.m1) << ','
                << format_number(br.utility.m2) << '\n';
        }
    }
    return csv.str();
}

json cmd_nash(const json& config) {
    validate_keys(config, "nash config", {"value_law", "k"}, {});
    const Distribution f = distribution_from_json(config.at("value_law"));
    const int k = config.at("k").get<int>();
    const NashReport rep = nash_report(k, f);
    json out{{"k", rep.k},
             {"r_star", rep.r_star},
             {"seller_revenue", rep.seller_revenue},
             {"buyer_utility", rep.buyer_utility},
             {"no_reserve_revenue", rep.no_reserve_revenue},
             {"no_reserve_utility", rep.no_reserve_utility}};
    out["revenue_equivalent"] =
        std::fabs(rep.seller_revenue - rep.no_reserve_revenue) <= 1e-8;
    out["utility_equivalent"] = std::fabs(rep.buyer_utility - rep.no_reserve_utility) <= 1e-8;
    out["alpha_c_thresh"] = rep.alpha_c_thresh ? json(*rep.alpha_c_thresh) : json();
    out["alpha_c_truthful"] = rep.alpha_c_truthful ? json(*rep.alpha_c_truthful) : json();
    return out;
}

json cmd_phase(const json& config) {
    validate_keys(config, "phase config", {"value_law"}, {"k", "competition"});
    const Distribution f = distribution_from_json(config.at("value_law"));
    if (config.contains("k") == config.contains("competition")) {
        throw ConfigInvalid("phase: exactly one of 'k' or 'competition' is required");
    }
    const Distribution g = config.contains("competition")
                               ? distribution_from_json(config.at("competition"))
                               : power_of_cdf(f, config.at("k").get<int>() - 1);
    const PhaseReport rep = critical_alpha(g, f);
    return json{{"alpha_c", rep.alpha_c},
                {"u_truthful_at_alpha_c", rep.u_truthful_at_alpha_c},
                {"u_threshold_at_alpha_c", rep.u_threshold_at_alpha_c}};
}

std::string cmd_erm(const json& config, std::uint64_t seed) {
    validate_keys(config, "erm config", {"value_law", "r", "eta", "n_grid", "delta", "trials"},
                  {"eps_zero_control"});
    const Distribution f = distribution_from_json(config.at("value_law"));
    const double r = config.at("r").get<double>();
    const double eta = config.at("eta").get<double>();
    const double delta = config.at("delta").get<double>();
    const int trials = config.at("trials").get<int>();
    const bool control = config.contains("eps_zero_control") && config.at("eps_zero_control").get<bool>();
    std::vector<long> n_grid;
    for (const auto& n : config.at("n_grid")) n_grid.push_back(n.get<long>());
    if (n_grid.empty()) throw ConfigInvalid("erm: empty n_grid");

    const auto reports = erm_theorem5_experiment(f, r, eta, n_grid, delta, trials, seed, control);

    std::ostringstream csv;
    csv << "n,eps,x_hat,x_max,c_n,bound,hit\n";
    for (const auto& rep : reports) {
        csv << rep.n << ',' << format_number(rep.eps) << ',' << format_number(rep.x_hat) << ','
            << format_number(rep.x_max) << ',' << format_number(rep.c_n) << ','
            << format_number(rep.bound) << ',' << (rep.hit ? 1 : 0) << '\n';
    }
    for (long n : n_grid) {
        std::vector<double> xs;
        double hits = 0.0, d1 = 0.0;
        for (const auto& rep : reports) {
            if (rep.n != n) continue;
            xs.push_back(rep.x_hat);
            hits += rep.hit ? 1.0 : 0.0;
            d1 += rep.delta1;
        }
        std::sort(xs.begin(), xs.end());
        const double median = xs[xs.size() / 2];
        csv << "# summary n=" << n << " trials=" << xs.size()
            << " hit_rate=" << format_number(hits / static_cast<double>(xs.size()))
            << " delta1_hat=" << format_number(d1 / static_cast<double>(xs.size()))
            << " median_x_hat=" << format_number(median) << '\n';
    }
    return csv.str();
}

std::string cmd_mechanisms(const json& config) {
    validate_keys(config, "mechanisms config", {"value_law", "k"}, {"thresholding"});
    const Distribution f = distribution_from_json(config.at("value_law"));
    const int k = config.at("k").get<int>();
    const bool thresholding =
        !config.contains("thresholding") || config.at("thresholding").get<bool>();
    std::ostringstream csv;
    csv << "mechanism,u_truthful,u_threshold,uplift_abs,uplift_rel\n";
    for (const auto& row : compare_all(k, f, thresholding)) {
        csv << mechanism_name(row.mechanism) << ',' << format_number(row.u_truthful) << ','
            << format_number(row.u_threshold) << ',' << format_number(row.uplift_abs) << ','
            << format_number(row.uplift_rel) << '\n';
    }
    return csv.str();
}

json default_config(const std::string& command) {
    const json uniform01 = {{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}};
    if (command == "best-response") {
        return {{"value_law", uniform01},
                {"competition", uniform01},
                {"alpha_grid", {{"start", 0.0}, {"stop", 1.0}, {"count", 41}}},
                {"search_grid", 200}};
    }
    if (command == "nash") return {{"value_law", uniform01}, {"k", 2}};
    if (command == "phase") return {{"value_law", uniform01}, {"k", 2}};
    if (command == "erm") {
        return {{"value_law", uniform01}, {"r", 0.5},      {"eta", 0.1},
                {"n_grid", {1000, 10000, 100000}},         {"delta", 0.05},
                {"trials", 200}};
    }
    if (command == "mechanisms") return {{"value_law", uniform01}, {"k", 2}};
    if (command == "verify") return json::object();
    throw ConfigInvalid("no default config for command '" + command + "'");
}

namespace {

json load_config(const std::string& path, const std::string& command) {
    if (path.empty()) return default_config(command);
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config parse error: ") + e.what());
    }
    return j;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ConfigInvalid("cannot open output file: " + out_path);
    out << content;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigInvalid*>(&e)) return 2;
    return 3; // assumption violations and other domain errors
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"auctionlab: strategic bidding in two-stage repeated auctions"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0xA0C710u;
    int grid = 0;
    std::string only;

    auto* c_best = app.add_subcommand("best-response", "alpha sweep of the best double-threshold response (CSV)");
    auto* c_nash = app.add_subcommand("nash", "symmetric equilibrium threshold and revenue equivalence (JSON)");
    auto* c_phase = app.add_subcommand("phase", "critical alpha of the threshold/truthful transition (JSON)");
    auto* c_erm = app.add_subcommand("erm", "finite-sample ERM reserve experiment (CSV)");
    auto* c_mech = app.add_subcommand("mechanisms", "mechanism comparison table (CSV)");
    auto* c_verify = app.add_subcommand("verify", "run the acceptance suite");
    for (auto* sub : {c_best, c_nash, c_phase, c_erm, c_mech, c_verify}) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "RNG seed")->envname("AUCTIONLAB_SEED");
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--grid", grid, "search grid override");
    }
    c_verify->add_option("--only", only, "comma-separated criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_best->parsed()) {
            json cfg = load_config(config_path, "best-response");
            if (grid > 0) cfg["search_grid"] = grid;
            write_output(out_path, cmd_best_response(cfg));
        } else if (c_nash->parsed()) {
            write_output(out_path, cmd_nash(load_config(config_path, "nash")).dump(2) + "\n");
        } else if (c_phase->parsed()) {
            write_output(out_path, cmd_phase(load_config(config_path, "phase")).dump(2) + "\n");
        } else if (c_erm->parsed()) {
            write_output(out_path, cmd_erm(load_config(config_path, "erm"), seed));
        } else if (c_mech->parsed()) {
            write_output(out_path, cmd_mechanisms(load_config(config_path, "mechanisms")));
        } else if (c_verify->parsed()) {
            json cfg = load_config(config_path, "verify");
            validate_keys(cfg, "verify config", {}, {"criteria", "tolerance_scale", "seed"});
            verify::Options opt;
            opt.seed = seed;
            if (cfg.contains("seed")) opt.seed = cfg.at("seed").get<std::uint64_t>();
            if (cfg.contains("tolerance_scale")) {
                opt.tolerance_scale = cfg.at("tolerance_scale").get<double>();
            }
            if (cfg.contains("criteria")) {
                for (const auto& c : cfg.at("criteria")) opt.criteria.push_back(c.get<int>());
            }
            if (!only.empty()) {
                opt.criteria.clear();
                std::stringstream ss(only);
                std::string tok;
                while (std::getline(ss, tok, ',')) opt.criteria.push_back(std::stoi(tok));
            }
            const auto results = verify::run(opt);
            write_output(out_path, verify::format_report(results));
            if (out_path.empty()) std::cout.flush();
            return verify::all_passed(results) ? 0 : 4;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace auctionlab::lab
