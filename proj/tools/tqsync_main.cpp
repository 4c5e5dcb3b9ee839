// tqsync: command line front end for the clock-synchronization simulator.
//
//   tqsync simulate --protocol improved --bits 6 --eps 0.015625 --T 0.3 --seed 7
//   tqsync sweep --protocol simple_one_way --T 0.5 --grid-shots 100,1000 --runs 200 --seed 1
//   tqsync costs --bits 11 --eps 0.00048828125 --eta 0.99
//   tqsync fig1 --etas 0.9,0.99,0.999 --k-max 16 --out fig1.csv
//   tqsync selftest
//
// Exit codes: 0 success, 2 configuration error, 3 invariant failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqsync/cost_model.hpp"
#include "tqsync/harness.hpp"
#include "tqsync/selftest.hpp"

namespace {

using tqsync::harness::ConfigError;
using tqsync::harness::ExperimentConfig;

// Command-line values. Each is applied only when given, after the config file.
struct ConfigFlags {
    std::string config_path;
    std::string protocol;
    double omega = 1.0;
    double T = 0.5;
    std::vector<double> T_range;
    double eta = 1.0;
    int k = 4;
    int k1 = 0;
    double eps = 0.1;
    std::uint64_t shots = 0;
    std::uint64_t runs = 0;
    std::uint64_t qubits = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::string count_lost;
    std::string out;

    CLI::Option *o_protocol, *o_omega, *o_T, *o_T_range, *o_eta, *o_k, *o_k1, *o_eps, *o_shots, *o_runs, *o_qubits,
        *o_seed, *o_mode, *o_count_lost, *o_out;

    void attach(CLI::App *app) {
        app->add_option("--config", config_path, "JSON experiment config; flags override it")
            ->check(CLI::ExistingFile);
        o_protocol = app->add_option("--protocol", protocol,
                                     "simple_one_way|simple_two_way|improved|entangled_oneshot|"
                                     "entangled_bitwise|hybrid");
        o_omega = app->add_option("--omega", omega, "qubit angular frequency (rad/s)");
        o_T = app->add_option("--T", T, "offset omega*t_BA in units of pi");
        o_T_range = app->add_option("--T-range", T_range, "draw T uniformly from [lo, hi] per run")->expected(2);
        o_eta = app->add_option("--eta", eta, "channel survival probability");
        o_k = app->add_option("--bits", k, "bits of precision k");
        o_k1 = app->add_option("--k1", k1, "hybrid phase-1 bits (default: cost optimum)");
        o_eps = app->add_option("--eps", eps, "failure budget");
        o_shots = app->add_option("--shots", shots, "shots for simple and one-shot protocols");
        o_runs = app->add_option("--runs", runs, "Monte Carlo runs per sweep row");
        o_qubits = app->add_option("--qubits", qubits, "GHZ size for entangled_oneshot");
        o_seed = app->add_option("--seed", seed, "master seed");
        o_mode = app->add_option("--mode", mode, "two_quadrature|paper_cosine_only");
        o_count_lost = app->add_option("--count-lost-sends", count_lost, "count lost transmissions as sends")
                           ->check(CLI::IsMember({"yes", "no"}));
        o_out = app->add_option("--out", out, "output file (default stdout)");
    }

    // Splits out an optional "grid" object, which only the sweep understands.
    nlohmann::json load_file() const {
        if (config_path.empty()) {
            return nlohmann::json::object();
        }
        std::ifstream f(config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            return nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }

    ExperimentConfig build(nlohmann::json *grid_out = nullptr) const {
        ExperimentConfig cfg;
        nlohmann::json file = load_file();
        if (file.is_object() && file.contains("grid")) {
            if (grid_out) {
                *grid_out = file["grid"];
            }
            file.erase("grid");
        }
        tqsync::harness::merge_config(cfg, file.dump());
        if (*o_protocol) {
            auto p = tqsync::harness::parse_protocol(protocol);
            if (!p) {
                throw ConfigError("unknown protocol \"" + protocol + "\"");
            }
            cfg.protocol = *p;
        }
        if (*o_omega) cfg.omega = omega;
        if (*o_T) cfg.T = {T, T};
        if (*o_T_range) cfg.T = {T_range[0], T_range[1]};
        if (*o_eta) cfg.eta = eta;
        if (*o_k) cfg.k = k;
        if (*o_k1) cfg.k1 = k1;
        if (*o_eps) cfg.eps = eps;
        if (*o_shots) cfg.shots = shots;
        if (*o_runs) cfg.runs = runs;
        if (*o_qubits) cfg.qubits = qubits;
        if (*o_seed) cfg.seed = seed;
        if (*o_mode) {
            auto m = tqsync::parse_quadrature_mode(mode);
            if (!m) {
                throw ConfigError("unknown quadrature mode \"" + mode + "\"");
            }
            cfg.mode = *m;
        }
        if (*o_count_lost) cfg.count_lost_sends = count_lost == "yes";
        if (*o_out) cfg.out = out;
        return cfg;
    }
};

template <typename T>
std::optional<std::vector<T>> grid_axis(const nlohmann::json &grid, const char *key, const std::vector<T> &flag,
                                        const CLI::Option *opt) {
    if (opt && *opt) {
        return flag;
    }
    if (grid.is_object() && grid.contains(key)) {
        try {
            return grid[key].get<std::vector<T>>();
        } catch (const nlohmann::json::exception &) {
            throw ConfigError(std::string("grid axis \"") + key + "\" must be an array of numbers");
        }
    }
    return std::nullopt;
}

int run_simulate(const ConfigFlags &flags, const std::string &format) {
    ExperimentConfig cfg = flags.build();
    auto result = tqsync::harness::run_single(cfg);
    tqsync::harness::write_output(cfg.out, format == "csv" ? result.csv : result.json);
    return tqsync::harness::kExitOk;
}

struct GridFlags {
    std::vector<double> eta, eps, T;
    std::vector<int> k;
    std::vector<std::uint64_t> shots;
    CLI::Option *o_eta = nullptr, *o_eps = nullptr, *o_T = nullptr, *o_k = nullptr, *o_shots = nullptr;
    unsigned jobs = 1;

    void attach(CLI::App *app) {
        o_eta = app->add_option("--grid-eta", eta, "eta axis")->delimiter(',');
        o_k = app->add_option("--grid-bits", k, "k axis")->delimiter(',');
        o_eps = app->add_option("--grid-eps", eps, "eps axis")->delimiter(',');
        o_shots = app->add_option("--grid-shots", shots, "shots axis")->delimiter(',');
        o_T = app->add_option("--grid-T", T, "fixed-offset axis, units of pi")->delimiter(',');
        app->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
    }
};

int run_sweep(const ConfigFlags &flags, const GridFlags &g) {
    nlohmann::json grid_json;
    tqsync::harness::SweepGrid grid;
    grid.base = flags.build(&grid_json);
    grid.eta = grid_axis(grid_json, "eta", g.eta, g.o_eta);
    grid.k = grid_axis(grid_json, "k", g.k, g.o_k);
    grid.eps = grid_axis(grid_json, "eps", g.eps, g.o_eps);
    grid.shots = grid_axis(grid_json, "shots", g.shots, g.o_shots);
    grid.T = grid_axis(grid_json, "T", g.T, g.o_T);
    auto result = tqsync::harness::run_sweep(grid, g.jobs);
    tqsync::harness::write_output(grid.base.out, result.to_csv());
    return tqsync::harness::kExitOk;
}

int run_costs(int k, double eps, double eta, int k1, bool k1_given, const std::string &out) {
    using namespace tqsync::cost;
    std::string csv = tqsync::harness::csv_line({"protocol", "k", "eps", "eta", "k1", "cost"});
    for (Protocol p : {Protocol::SqlOneWay, Protocol::SqlTwoWay, Protocol::Improved, Protocol::LossySql,
                       Protocol::LossyImproved, Protocol::Hybrid}) {
        CostQuery q{k, eps, eta, p, k1_given ? std::optional<int>(k1) : std::nullopt};
        std::string k1_field;
        if (p == Protocol::Hybrid) {
            q.k1 = q.k1.value_or(optimal_k1(k, eps, eta));
            k1_field = std::to_string(*q.k1);
        }
        double c;
        try {
            c = evaluate(q);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
        csv += tqsync::harness::csv_line({std::string(to_string(p)), std::to_string(k),
                                          tqsync::harness::csv_number(eps), tqsync::harness::csv_number(eta),
                                          k1_field, tqsync::harness::csv_number(c)});
    }
    tqsync::harness::write_output(out, csv);
    return tqsync::harness::kExitOk;
}

int run_fig1(const std::vector<double> &etas, int k_max, const std::string &eps_rule, const std::string &out) {
    tqsync::harness::EpsRule rule;
    if (eps_rule != "pow2") {
        rule.pow2 = false;
        try {
            size_t used = 0;
            rule.fixed = std::stod(eps_rule, &used);
            if (used != eps_rule.size()) {
                throw std::invalid_argument(eps_rule);
            }
        } catch (const std::exception &) {
            throw ConfigError("--eps must be \"pow2\" or a number, got \"" + eps_rule + "\"");
        }
    }
    auto rows = tqsync::harness::fig1_rows(etas, k_max, rule);
    tqsync::harness::write_output(out, tqsync::harness::fig1_csv(rows));
    for (double eta : etas) {
        auto ks = tqsync::harness::crossover_k(rows, eta);
        std::cerr << "eta=" << tqsync::harness::csv_number(eta) << " crossover k*="
                  << (ks ? std::to_string(*ks) : std::string("none")) << "\n";
    }
    return tqsync::harness::kExitOk;
}

double eb_mutant(std::uint64_t m, double eta) {
    // Wrong exponent: eta^{-m} instead of eta^{-2m}.
    return (std::pow(eta, -static_cast<double>(m)) - 1.0) / (1.0 - eta * eta);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ticking-qubit clock synchronization: simulator, cost model and experiment harness"};
    app.require_subcommand(1);

    ConfigFlags sim_flags;
    std::string format = "json";
    auto *sim = app.add_subcommand("simulate", "run one protocol once and print its report");
    sim_flags.attach(sim);
    sim->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    ConfigFlags sweep_flags;
    GridFlags grid_flags;
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over a parameter grid, CSV output");
    sweep_flags.attach(sweep);
    grid_flags.attach(sweep);

    int cost_k = 4;
    int cost_k1 = 0;
    double cost_eps = 0.1;
    double cost_eta = 1.0;
    std::string cost_out;
    auto *costs = app.add_subcommand("costs", "analytic communication costs of every protocol");
    costs->add_option("--bits", cost_k, "bits of precision k");
    costs->add_option("--eps", cost_eps, "failure budget");
    costs->add_option("--eta", cost_eta, "channel survival probability");
    auto *cost_k1_opt = costs->add_option("--k1", cost_k1, "hybrid phase-1 bits (default: optimum)");
    costs->add_option("--out", cost_out, "output file (default stdout)");

    std::vector<double> fig_etas{0.9, 0.99, 0.999};
    int fig_kmax = 16;
    std::string fig_eps = "pow2";
    std::string fig_out;
    auto *fig1 = app.add_subcommand("fig1", "improved/SQL cost ratio per eta and k, CSV output");
    fig1->add_option("--etas", fig_etas, "comma separated eta values")->delimiter(',');
    fig1->add_option("--k-max", fig_kmax, "largest k");
    fig1->add_option("--eps", fig_eps, "\"pow2\" for eps = 2^-k, or a fixed value");
    fig1->add_option("--out", fig_out, "output file (default stdout)");

    std::uint64_t st_seed = 20240917;
    std::string st_mutant;
    auto *st = app.add_subcommand("selftest", "run the invariant suite at reduced sample counts");
    st->add_option("--seed", st_seed, "seed for the randomized checks");
    st->add_option("--mutant", st_mutant, "inject a known defect to confirm detection")
        ->check(CLI::IsMember({"eb_exponent"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return tqsync::harness::kExitConfig;
    }

    try {
        if (*sim) {
            return run_simulate(sim_flags, format);
        }
        if (*sweep) {
            return run_sweep(sweep_flags, grid_flags);
        }
        if (*costs) {
            return run_costs(cost_k, cost_eps, cost_eta, cost_k1, static_cast<bool>(*cost_k1_opt), cost_out);
        }
        if (*fig1) {
            return run_fig1(fig_etas, fig_kmax, fig_eps, fig_out);
        }
        if (*st) {
            tqsync::selftest::Options opts;
            opts.seed = st_seed;
            if (st_mutant == "eb_exponent") {
                opts.expected_bounces = eb_mutant;
            }
            return tqsync::selftest::report(tqsync::selftest::run(opts), std::cout);
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return tqsync::harness::kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return tqsync::harness::kExitConfig;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return tqsync::harness::kExitConfig;
    } catch (const tqsync::harness::InvariantFailure &e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return tqsync::harness::kExitInvariant;
    }
    return tqsync::harness::kExitOk;
}
