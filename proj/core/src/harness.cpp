#include "tqsync/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tqsync/cost_model.hpp"

namespace tqsync::harness {

using nlohmann::json;

namespace {

constexpr double kBoundSlack = 1e-12;

struct ProtocolName {
    ProtocolId id;
    std::string_view name;
};

constexpr ProtocolName kProtocolNames[] = {
    {ProtocolId::SimpleOneWay, "simple_one_way"},     {ProtocolId::SimpleTwoWay, "simple_two_way"},
    {ProtocolId::Improved, "improved"},               {ProtocolId::EntangledOneshot, "entangled_oneshot"},
    {ProtocolId::EntangledBitwise, "entangled_bitwise"}, {ProtocolId::Hybrid, "hybrid"},
};

bool is_bitwise(ProtocolId p) {
    return p == ProtocolId::Improved || p == ProtocolId::EntangledBitwise || p == ProtocolId::Hybrid;
}

int quadratures(const ExperimentConfig &cfg) { return cfg.mode == QuadratureMode::TwoQuadrature ? 2 : 1; }

std::string fmt(double v) { return csv_number(v); }

[[noreturn]] void fail(const std::string &msg) { throw ConfigError(msg); }

template <typename T>
T get_as(const json &j, const char *key) {
    try {
        return j.get<T>();
    } catch (const json::exception &) {
        fail(std::string("config key \"") + key + "\" has the wrong type");
    }
}

double get_number(const json &j, const char *key) {
    if (!j.is_number()) {
        fail(std::string("config key \"") + key + "\" must be a number");
    }
    return j.get<double>();
}

std::uint64_t get_count(const json &j, const char *key) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        fail(std::string("config key \"") + key + "\" must be a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

int get_int(const json &j, const char *key) {
    if (!j.is_number_integer()) {
        fail(std::string("config key \"") + key + "\" must be an integer");
    }
    auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail(std::string("config key \"") + key + "\" out of range");
    }
    return static_cast<int>(v);
}

// Expected counted sends per shot kind.
double one_way_shot_sends(const ExperimentConfig &cfg) {
    return cfg.count_lost_sends ? 1.0 / cfg.eta : 1.0;
}

double bounce_shot_sends(const ExperimentConfig &cfg, std::uint64_t m) {
    double per_attempt = cfg.count_lost_sends ? 1.0 + cfg.eta : cfg.eta * (1.0 + cfg.eta);
    if (cfg.eta == 1.0) {
        per_attempt = 2.0;
    }
    return expected_bounces(m, cfg.eta) * per_attempt;
}

double ghz_shot_sends(const ExperimentConfig &cfg, std::uint64_t qubits) {
    double M = static_cast<double>(qubits);
    if (!cfg.count_lost_sends || cfg.eta == 1.0) {
        return M;
    }
    return M * std::exp(-M * std::log(cfg.eta));
}

double bitwise_sends(const ExperimentConfig &cfg, int k, double eps, bool ghz) {
    double n = static_cast<double>(cost::repetitions_per_bit(k, eps));
    double per_round = 0.0;
    for (int j = 0; j < k; ++j) {
        per_round += ghz ? ghz_shot_sends(cfg, std::uint64_t{2} << j) : bounce_shot_sends(cfg, std::uint64_t{1} << j);
    }
    return quadratures(cfg) * n * per_round;
}

void check_T_range(const ExperimentConfig &cfg, double lo, double hi, const std::string &what) {
    if (cfg.T.lo < lo - kBoundSlack || cfg.T.hi > hi + kBoundSlack) {
        fail(std::string(to_string(cfg.protocol)) + ": offset T in [" + fmt(cfg.T.lo) + ", " + fmt(cfg.T.hi) +
             "] (units of pi) lies outside " + what + " [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
}

json config_object(const ExperimentConfig &cfg) {
    json j;
    j["protocol"] = std::string(to_string(cfg.protocol));
    j["omega"] = cfg.omega;
    if (cfg.T.fixed()) {
        j["T"] = cfg.T.lo;
    } else {
        j["T_range"] = json::array({cfg.T.lo, cfg.T.hi});
    }
    j["eta"] = cfg.eta;
    j["k"] = cfg.k;
    j["k1"] = cfg.k1 ? json(*cfg.k1) : json(nullptr);
    j["eps"] = cfg.eps;
    j["shots"] = cfg.shots;
    j["runs"] = cfg.runs;
    j["qubits"] = cfg.qubits;
    j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    j["mode"] = std::string(to_string(cfg.mode));
    j["count_lost_sends"] = cfg.count_lost_sends;
    return j;
}

std::string bits_string(const std::vector<int> &bits) {
    std::string s;
    for (int b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

std::string opt_number(const std::optional<double> &v) { return v ? csv_number(*v) : std::string(); }

std::string opt_bool(const std::optional<bool> &v) {
    if (!v) {
        return {};
    }
    return *v ? "true" : "false";
}

}  // namespace

std::string_view to_string(ProtocolId p) {
    for (const auto &e : kProtocolNames) {
        if (e.id == p) {
            return e.name;
        }
    }
    return "?";
}

std::optional<ProtocolId> parse_protocol(std::string_view s) {
    for (const auto &e : kProtocolNames) {
        if (e.name == s) {
            return e.id;
        }
    }
    return std::nullopt;
}

void merge_config(ExperimentConfig &cfg, std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error &e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        fail("config must be a JSON object");
    }
    for (const auto &[key, val] : j.items()) {
        if (key == "protocol") {
            auto p = parse_protocol(get_as<std::string>(val, "protocol"));
            if (!p) {
                fail("unknown protocol \"" + val.get<std::string>() + "\"");
            }
            cfg.protocol = *p;
        } else if (key == "omega") {
            cfg.omega = get_number(val, "omega");
        } else if (key == "T") {
            double t = get_number(val, "T");
            cfg.T = {t, t};
        } else if (key == "T_range") {
            if (!val.is_array() || val.size() != 2) {
                fail("config key \"T_range\" must be [lo, hi]");
            }
            cfg.T = {get_number(val[0], "T_range"), get_number(val[1], "T_range")};
        } else if (key == "eta") {
            cfg.eta = get_number(val, "eta");
        } else if (key == "k") {
            cfg.k = get_int(val, "k");
        } else if (key == "k1") {
            cfg.k1 = val.is_null() ? std::nullopt : std::optional<int>(get_int(val, "k1"));
        } else if (key == "eps") {
            cfg.eps = get_number(val, "eps");
        } else if (key == "shots") {
            cfg.shots = get_count(val, "shots");
        } else if (key == "runs") {
            cfg.runs = get_count(val, "runs");
        } else if (key == "qubits") {
            cfg.qubits = get_count(val, "qubits");
        } else if (key == "seed") {
            cfg.seed = val.is_null() ? std::nullopt : std::optional<std::uint64_t>(get_count(val, "seed"));
        } else if (key == "mode") {
            auto m = parse_quadrature_mode(get_as<std::string>(val, "mode"));
            if (!m) {
                fail("unknown quadrature mode \"" + val.get<std::string>() + "\"");
            }
            cfg.mode = *m;
        } else if (key == "count_lost_sends") {
            cfg.count_lost_sends = get_as<bool>(val, "count_lost_sends");
        } else if (key == "out") {
            cfg.out = get_as<std::string>(val, "out");
        } else {
            fail("unknown config key \"" + key + "\"");
        }
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    ExperimentConfig cfg;
    merge_config(cfg, json_text);
    return cfg;
}

void validate(const ExperimentConfig &cfg) {
    if (!cfg.seed) {
        fail("seed missing: pass --seed or set \"seed\" in the config");
    }
    if (!(cfg.omega > 0.0) || !std::isfinite(cfg.omega)) {
        fail("omega=" + fmt(cfg.omega) + " must be positive and finite");
    }
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) {
        fail("eta=" + fmt(cfg.eta) + " outside (0, 1]");
    }
    if (!std::isfinite(cfg.T.lo) || !std::isfinite(cfg.T.hi) || cfg.T.lo > cfg.T.hi) {
        fail("offset range T=[" + fmt(cfg.T.lo) + ", " + fmt(cfg.T.hi) + "] is not a finite interval");
    }
    if (cfg.runs == 0) {
        fail("runs must be >= 1");
    }
    switch (cfg.protocol) {
        case ProtocolId::SimpleOneWay:
            if (cfg.shots == 0) {
                fail("shots must be >= 1");
            }
            check_T_range(cfg, 1.0 / 6.0, 5.0 / 6.0, "the one-way fringe");
            break;
        case ProtocolId::SimpleTwoWay:
            if (cfg.shots == 0) {
                fail("shots must be >= 1");
            }
            check_T_range(cfg, 1.0 / 12.0, 5.0 / 12.0, "the two-way fringe");
            break;
        case ProtocolId::EntangledOneshot:
            if (cfg.shots == 0) {
                fail("shots must be >= 1");
            }
            if (cfg.qubits == 0) {
                fail("qubits must be >= 1");
            }
            if (cfg.eta != 1.0) {
                fail("entangled_oneshot runs on a lossless channel; eta must be 1");
            }
            check_T_range(cfg, 0.0, 1.0 / static_cast<double>(cfg.qubits), "the unambiguous range [0, 1/M]");
            break;
        case ProtocolId::Improved:
        case ProtocolId::EntangledBitwise:
        case ProtocolId::Hybrid:
            if (cfg.k < 1 || cfg.k > 62) {
                fail("bits of precision k=" + std::to_string(cfg.k) + " outside [1, 62]");
            }
            if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
                fail("eps=" + fmt(cfg.eps) + " outside (0, 1)");
            }
            if (cfg.protocol == ProtocolId::Hybrid && cfg.k1 && (*cfg.k1 < 1 || *cfg.k1 > cfg.k)) {
                fail("hybrid needs 1 <= k1 <= k, got k1=" + std::to_string(*cfg.k1));
            }
            {
                int limit = max_bits_for_counter(cost::repetitions_per_bit(cfg.k, cfg.eps), quadratures(cfg));
                if (cfg.k > limit) {
                    fail("k=" + std::to_string(cfg.k) + " overflows the send counter; need k <= " +
                         std::to_string(limit));
                }
            }
            check_T_range(cfg, 0.0, 1.0, "the bitwise range");
            break;
    }
    double sends = expected_sends(cfg);
    if (!(sends <= kMaxExpectedSends)) {
        fail("infeasible: expected " + fmt(sends) + " one-way sends per run exceeds the " + fmt(kMaxExpectedSends) +
             " limit");
    }
}

std::string canonical_json(const ExperimentConfig &cfg) { return config_object(cfg).dump(); }

std::string fingerprint(const ExperimentConfig &cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_json(cfg))));
    return buf;
}

double expected_sends(const ExperimentConfig &cfg) {
    switch (cfg.protocol) {
        case ProtocolId::SimpleOneWay: return static_cast<double>(cfg.shots) * one_way_shot_sends(cfg);
        case ProtocolId::SimpleTwoWay: return static_cast<double>(cfg.shots) * bounce_shot_sends(cfg, 1);
        case ProtocolId::EntangledOneshot: return static_cast<double>(cfg.shots) * static_cast<double>(cfg.qubits);
        case ProtocolId::Improved: return bitwise_sends(cfg, cfg.k, cfg.eps, false);
        case ProtocolId::EntangledBitwise: return bitwise_sends(cfg, cfg.k, cfg.eps, true);
        case ProtocolId::Hybrid: {
            int k1 = cfg.k1 ? *cfg.k1 : select_k1(cfg.eta, cfg.k, cfg.eps);
            double phase1 = bitwise_sends(cfg, k1, cfg.eps / 2.0, false);
            double shots = static_cast<double>(cost::hybrid_phase2_shots(k1, cfg.k, cfg.eps));
            if (shots == 0.0) {
                return phase1;
            }
            return phase1 + quadratures(cfg) * shots * bounce_shot_sends(cfg, std::uint64_t{1} << k1);
        }
    }
    return 0.0;
}

RunRecord run_once(const ExperimentConfig &cfg, const RngStream &rng) {
    double T = cfg.T.lo;
    if (!cfg.T.fixed()) {
        RngStream truth_rng = rng.child("truth");
        T = cfg.T.lo + (cfg.T.hi - cfg.T.lo) * truth_rng.uniform();
    }
    TruthModel truth = TruthModel::from_half_turns(cfg.omega, T);
    LossyChannel ch(cfg.eta, cfg.count_lost_sends);
    RngStream prng = rng.child("protocol");
    ProtocolReport rep;
    switch (cfg.protocol) {
        case ProtocolId::SimpleOneWay: rep = simple_one_way(truth, cfg.shots, ch, prng); break;
        case ProtocolId::SimpleTwoWay: rep = simple_two_way(truth, cfg.shots, ch, prng); break;
        case ProtocolId::Improved: rep = improved_estimate(truth, cfg.k, cfg.eps, cfg.mode, ch, prng); break;
        case ProtocolId::EntangledOneshot: rep = entangled_oneshot(truth, cfg.qubits, cfg.shots, prng); break;
        case ProtocolId::EntangledBitwise:
            rep = entangled_bitwise(truth, cfg.k, cfg.eps, cfg.mode, ch, prng);
            break;
        case ProtocolId::Hybrid: rep = hybrid_estimate(truth, cfg.k1, cfg.k, cfg.eps, cfg.mode, ch, prng); break;
    }
    return {truth, std::move(rep)};
}

std::string report_json(const ExperimentConfig &cfg, const RunRecord &rec) {
    const ProtocolReport &r = rec.report;
    nlohmann::ordered_json j;
    j["fingerprint"] = fingerprint(cfg);
    j["config"] = config_object(cfg);
    j["truth"] = {{"T", rec.truth.half_turns()}, {"t_ba", rec.truth.t_ba}};
    j["protocol"] = r.protocol;
    j["mode"] = std::string(to_string(r.mode));
    j["count_lost_sends"] = r.count_lost_sends;
    j["estimate_t_ba"] = r.estimate_t_ba;
    j["estimate_phi"] = r.estimate_phi;
    if (r.mean_outcome) {
        j["mean_outcome"] = *r.mean_outcome;
    }
    j["total_one_way_sends"] = r.total_one_way_sends;
    j["simple_phase_sends"] = r.simple_phase_sends;
    j["shots"] = r.shots;
    j["restarts"] = r.restarts;
    j["lost"] = r.lost;
    if (r.closed_form_sends) {
        j["closed_form_sends"] = *r.closed_form_sends;
    }
    j["expected_sends"] = expected_sends(cfg);
    if (r.k1) {
        j["k1"] = *r.k1;
    }
    if (!r.bits.empty()) {
        j["bits"] = bits_string(r.bits);
    }
    auto records = nlohmann::ordered_json::array();
    for (const auto &b : r.bit_records) {
        nlohmann::ordered_json e;
        e["bit_index"] = b.bit_index;
        e["repetitions"] = b.repetitions;
        e["cos_estimate"] = b.cos_estimate;
        if (b.sin_estimate) {
            e["sin_estimate"] = *b.sin_estimate;
        }
        e["decided_bit"] = b.decided_bit;
        e["sends_used"] = b.sends_used;
        e["restarts"] = b.restarts;
        records.push_back(std::move(e));
    }
    j["bit_records"] = std::move(records);
    if (r.abs_error_t) {
        j["abs_error_t"] = *r.abs_error_t;
    }
    if (r.succeeded) {
        j["succeeded"] = *r.succeeded;
    }
    return j.dump(2) + "\n";
}

SingleResult run_single(const ExperimentConfig &cfg) {
    validate(cfg);
    RngStream rng = RngStream(*cfg.seed).child("single");
    SingleResult out{run_once(cfg, rng), fingerprint(cfg), {}, {}};
    const ProtocolReport &r = out.record.report;
    out.json = report_json(cfg, out.record);
    out.csv = csv_line({"fingerprint", "protocol", "mode", "T", "t_ba", "estimate_t_ba", "estimate_phi", "abs_error_t",
                        "succeeded", "bits", "k1", "total_one_way_sends", "lost", "restarts", "shots"});
    out.csv += csv_line({out.fingerprint, r.protocol, std::string(to_string(r.mode)),
                         csv_number(out.record.truth.half_turns()), csv_number(out.record.truth.t_ba),
                         csv_number(r.estimate_t_ba), csv_number(r.estimate_phi), opt_number(r.abs_error_t),
                         opt_bool(r.succeeded), bits_string(r.bits), r.k1 ? std::to_string(*r.k1) : std::string(),
                         std::to_string(r.total_one_way_sends), std::to_string(r.lost), std::to_string(r.restarts),
                         std::to_string(r.shots)});
    return out;
}

std::vector<ExperimentConfig> expand(const SweepGrid &grid) {
    auto axis = [](const auto &opt, auto base, const char *name) {
        using V = std::decay_t<decltype(base)>;
        if (!opt) {
            return std::vector<V>{base};
        }
        if (opt->empty()) {
            fail(std::string("empty grid: axis \"") + name + "\" has no values");
        }
        return std::vector<V>(opt->begin(), opt->end());
    };
    auto etas = axis(grid.eta, grid.base.eta, "eta");
    auto ks = axis(grid.k, grid.base.k, "k");
    auto epss = axis(grid.eps, grid.base.eps, "eps");
    auto shots = axis(grid.shots, grid.base.shots, "shots");
    std::vector<TruthSpec> Ts;
    if (grid.T) {
        for (double t : axis(grid.T, 0.0, "T")) {
            Ts.push_back({t, t});
        }
    } else {
        Ts.push_back(grid.base.T);
    }
    std::vector<ExperimentConfig> out;
    for (double eta : etas) {
        for (int k : ks) {
            for (double eps : epss) {
                for (std::uint64_t s : shots) {
                    for (const auto &T : Ts) {
                        ExperimentConfig c = grid.base;
                        c.eta = eta;
                        c.k = k;
                        c.eps = eps;
                        c.shots = s;
                        c.T = T;
                        out.push_back(c);
                    }
                }
            }
        }
    }
    return out;
}

namespace {

SweepRow run_row(const ExperimentConfig &cfg, const RngStream &row_rng) {
    SweepRow row;
    row.config = cfg;
    row.fingerprint = fingerprint(cfg);
    try {
        validate(cfg);
    } catch (const ConfigError &e) {
        row.error = e.what();
        row.failure_rate = 1.0;
        row.mean_estimate_t = row.rms_error_t = row.mean_sends = row.analytic_sends = row.ratio =
            std::numeric_limits<double>::quiet_NaN();
        return row;
    }
    double sum_est = 0.0;
    double sum_sq = 0.0;
    double sum_sends = 0.0;
    std::uint64_t failures = 0;
    for (std::uint64_t r = 0; r < cfg.runs; ++r) {
        try {
            RunRecord rec = run_once(cfg, row_rng.child("run", r));
            const ProtocolReport &rep = rec.report;
            double err = rep.estimate_t_ba - rec.truth.t_ba;
            sum_est += rep.estimate_t_ba;
            sum_sq += err * err;
            sum_sends += static_cast<double>(rep.total_one_way_sends);
            ++row.completed_runs;
            if (is_bitwise(cfg.protocol) && rep.succeeded && !*rep.succeeded) {
                ++failures;
            }
        } catch (const std::exception &e) {
            ++failures;
            if (row.error.empty()) {
                row.error = e.what();
            }
        }
    }
    double done = static_cast<double>(row.completed_runs);
    double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_estimate_t = done > 0 ? sum_est / done : nan;
    row.rms_error_t = done > 0 ? std::sqrt(sum_sq / done) : nan;
    row.mean_sends = done > 0 ? sum_sends / done : nan;
    row.failure_rate = static_cast<double>(failures) / static_cast<double>(cfg.runs);
    row.analytic_sends = expected_sends(cfg);
    row.ratio = row.mean_sends / row.analytic_sends;
    return row;
}

}  // namespace

SweepResult run_sweep(const SweepGrid &grid, unsigned jobs) {
    std::vector<ExperimentConfig> configs = expand(grid);
    if (!grid.base.seed) {
        fail("seed missing: pass --seed or set \"seed\" in the config");
    }
    const RngStream master(*grid.base.seed);
    SweepResult result;
    result.rows.resize(configs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < configs.size(); i = next++) {
            result.rows[i] = run_row(configs[i], master.child("row", i));
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    return result;
}

std::string SweepResult::to_csv() const {
    std::string out = csv_line({"fingerprint", "protocol", "mode", "eta", "k", "k1", "eps", "shots", "runs", "T_lo",
                                "T_hi", "count_lost_sends", "completed_runs", "mean_estimate_t", "rms_error_t",
                                "failure_rate", "mean_sends", "analytic_sends", "ratio", "error"});
    for (const auto &r : rows) {
        const auto &c = r.config;
        out += csv_line({r.fingerprint, std::string(to_string(c.protocol)), std::string(to_string(c.mode)),
                         csv_number(c.eta), std::to_string(c.k), c.k1 ? std::to_string(*c.k1) : std::string(),
                         csv_number(c.eps), std::to_string(c.shots), std::to_string(c.runs), csv_number(c.T.lo),
                         csv_number(c.T.hi), c.count_lost_sends ? "yes" : "no", std::to_string(r.completed_runs),
                         csv_number(r.mean_estimate_t), csv_number(r.rms_error_t), csv_number(r.failure_rate),
                         csv_number(r.mean_sends), csv_number(r.analytic_sends), csv_number(r.ratio), r.error});
    }
    return out;
}

std::vector<Fig1Row> fig1_rows(const std::vector<double> &etas, int k_max, EpsRule rule) {
    if (k_max < 1) {
        fail("fig1: k_max must be >= 1");
    }
    if (etas.empty()) {
        fail("fig1: need at least one eta");
    }
    if (!rule.pow2 && !(rule.fixed > 0.0 && rule.fixed < 1.0)) {
        fail("fig1: eps=" + fmt(rule.fixed) + " outside (0, 1)");
    }
    std::vector<Fig1Row> rows;
    for (double eta : etas) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            fail("fig1: eta=" + fmt(eta) + " outside (0, 1]");
        }
        for (int k = 1; k <= k_max; ++k) {
            double eps = rule.pow2 ? std::ldexp(1.0, -k) : rule.fixed;
            double imp = cost::lossy_improved_cost(k, eps, eta);
            double sql = cost::lossy_sql_cost(k, eps, eta);
            rows.push_back({eta, k, imp, sql, imp / sql});
        }
    }
    return rows;
}

std::string fig1_csv(const std::vector<Fig1Row> &rows) {
    std::string out = "eta,k,cost_improved,cost_sql,ratio\r\n";
    for (const auto &r : rows) {
        out += csv_line({csv_number(r.eta), std::to_string(r.k), csv_number(r.cost_improved), csv_number(r.cost_sql),
                         csv_number(r.ratio)});
    }
    return out;
}

std::optional<int> crossover_k(const std::vector<Fig1Row> &rows, double eta) {
    std::vector<const Fig1Row *> curve;
    for (const auto &r : rows) {
        if (r.eta == eta) {
            curve.push_back(&r);
        }
    }
    if (curve.empty()) {
        return std::nullopt;
    }
    size_t start = 0;
    auto below = std::find_if(curve.begin(), curve.end(), [](const Fig1Row *r) { return r->ratio < 1.0; });
    if (below != curve.end()) {
        start = static_cast<size_t>(below - curve.begin());
    } else {
        auto mn = std::min_element(curve.begin(), curve.end(),
                                   [](const Fig1Row *a, const Fig1Row *b) { return a->ratio < b->ratio; });
        start = static_cast<size_t>(mn - curve.begin());
    }
    for (size_t i = start + 1; i < curve.size(); ++i) {
        if (curve[i]->ratio > 1.0) {
            return curve[i]->k;
        }
    }
    return std::nullopt;
}

std::string csv_field(std::string_view s) {
    bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!quote) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_line(const std::vector<std::string> &fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open output file " + path);
    }
    f << text;
    if (!f) {
        throw ConfigError("failed writing output file " + path);
    }
}

}  // namespace tqsync::harness
