#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tqsync/cost_model.hpp"
#include "tqsync/harness.hpp"
#include "tqsync/selftest.hpp"

using namespace tqsync;
using namespace tqsync::harness;

namespace {

ExperimentConfig base(ProtocolId p) {
    ExperimentConfig c;
    c.protocol = p;
    c.seed = 7;
    return c;
}

std::string config_error(const ExperimentConfig &c) {
    try {
        validate(c);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, parses_every_key) {
    auto c = parse_config(R"({"protocol":"hybrid","omega":2.5,"T_range":[0.1,0.9],"eta":0.99,"k":9,"k1":4,
        "eps":0.002,"shots":50,"runs":3,"qubits":5,"seed":11,"mode":"paper_cosine_only",
        "count_lost_sends":false,"out":"x.json"})");
    EXPECT_EQ(c.protocol, ProtocolId::Hybrid);
    EXPECT_EQ(c.omega, 2.5);
    EXPECT_EQ(c.T.lo, 0.1);
    EXPECT_EQ(c.T.hi, 0.9);
    EXPECT_EQ(c.eta, 0.99);
    EXPECT_EQ(c.k, 9);
    EXPECT_EQ(c.k1, 4);
    EXPECT_EQ(c.eps, 0.002);
    EXPECT_EQ(c.shots, 50u);
    EXPECT_EQ(c.runs, 3u);
    EXPECT_EQ(c.qubits, 5u);
    EXPECT_EQ(c.seed, 11u);
    EXPECT_EQ(c.mode, QuadratureMode::PaperCosineOnly);
    EXPECT_FALSE(c.count_lost_sends);
    EXPECT_EQ(c.out, "x.json");
}

TEST(Config, rejects_malformed_input) {
    EXPECT_THROW(parse_config("{"), ConfigError);
    EXPECT_THROW(parse_config("[]"), ConfigError);
    EXPECT_THROW(parse_config(R"({"bogus":1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"k":"six"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"seed":-1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"protocol":"teleport"})"), ConfigError);
}

TEST(Config, merge_overrides_only_present_keys) {
    ExperimentConfig c = base(ProtocolId::Improved);
    merge_config(c, R"({"k":6})");
    EXPECT_EQ(c.k, 6);
    EXPECT_EQ(c.seed, 7u);
}

TEST(Validate, fringe_diagnostics) {
    auto c = base(ProtocolId::SimpleOneWay);
    c.T = {0.1, 0.1};
    EXPECT_NE(config_error(c).find("fringe"), std::string::npos);
    c.T = {0.5, 0.5};
    EXPECT_EQ(config_error(c), "");
    c.T = {1.0 / 6, 5.0 / 6};
    EXPECT_EQ(config_error(c), "");

    auto t = base(ProtocolId::SimpleTwoWay);
    t.T = {0.5, 0.5};
    EXPECT_NE(config_error(t).find("fringe"), std::string::npos);
    t.T = {0.25, 0.25};
    EXPECT_EQ(config_error(t), "");
}

TEST(Validate, named_preconditions) {
    auto c = base(ProtocolId::Improved);
    c.eta = 0.0;
    EXPECT_NE(config_error(c).find("eta"), std::string::npos);
    c = base(ProtocolId::Improved);
    c.seed.reset();
    EXPECT_NE(config_error(c).find("seed"), std::string::npos);
    c = base(ProtocolId::Improved);
    c.eps = 1.0;
    EXPECT_NE(config_error(c).find("eps"), std::string::npos);
    c = base(ProtocolId::Improved);
    c.omega = -1.0;
    EXPECT_NE(config_error(c).find("omega"), std::string::npos);
    c = base(ProtocolId::Hybrid);
    c.k1 = 9;
    EXPECT_NE(config_error(c).find("k1"), std::string::npos);
    c = base(ProtocolId::EntangledOneshot);
    c.qubits = 4;
    c.T = {0.3, 0.3};
    EXPECT_NE(config_error(c).find("1/M"), std::string::npos);
    c = base(ProtocolId::Improved);
    c.k = 20;
    c.eta = 0.5;
    EXPECT_NE(config_error(c).find("infeasible"), std::string::npos);
}

TEST(Fingerprint, covers_parameters_not_output_path) {
    auto a = base(ProtocolId::Improved);
    auto b = a;
    b.out = "elsewhere.json";
    EXPECT_EQ(fingerprint(a), fingerprint(b));
    b.seed = 8;
    EXPECT_NE(fingerprint(a), fingerprint(b));
    b = a;
    b.eta = 0.999;
    EXPECT_NE(fingerprint(a), fingerprint(b));
    EXPECT_EQ(fingerprint(a).size(), 16u);
}

TEST(RunSingle, improved_is_bit_identical_on_rerun) {
    auto c = base(ProtocolId::Improved);
    c.k = 4;
    c.eps = 0.1;
    auto x = run_single(c);
    auto y = run_single(c);
    EXPECT_EQ(x.json, y.json);
    EXPECT_EQ(x.csv, y.csv);
    EXPECT_NE(x.json.find("\"bit_records\""), std::string::npos);
}

TEST(RunSingle, hybrid_reports_chosen_k1) {
    auto c = base(ProtocolId::Hybrid);
    c.k = 9;
    c.eps = std::ldexp(1.0, -9);
    c.eta = 0.99;
    auto r = run_single(c);
    ASSERT_TRUE(r.record.report.k1.has_value());
    EXPECT_EQ(*r.record.report.k1, oracle::best_k1(9, c.eps, 0.99));
    EXPECT_NE(r.json.find("\"k1\""), std::string::npos);
}

TEST(RunSingle, invalid_config_throws_before_running) {
    auto c = base(ProtocolId::Improved);
    c.eta = 0.0;
    EXPECT_THROW(run_single(c), ConfigError);
}

TEST(ExpectedSends, agrees_with_simulation) {
    for (bool count : {true, false}) {
        auto c = base(ProtocolId::Improved);
        c.k = 5;
        c.eps = 0.05;
        c.eta = 0.9;
        c.T = {0.0, 1.0};
        c.runs = 60;
        c.count_lost_sends = count;
        SweepGrid g;
        g.base = c;
        auto res = run_sweep(g, 1);
        ASSERT_EQ(res.rows.size(), 1u);
        EXPECT_NEAR(res.rows[0].ratio, 1.0, 0.03) << "count_lost_sends=" << count;
    }
}

TEST(Sweep, grid_order_and_row_count) {
    SweepGrid g;
    g.base = base(ProtocolId::Improved);
    g.base.runs = 2;
    g.eta = std::vector<double>{1.0, 0.95};
    g.k = std::vector<int>{2, 3, 4};
    auto res = run_sweep(g, 2);
    ASSERT_EQ(res.rows.size(), 6u);
    EXPECT_EQ(res.rows[0].config.eta, 1.0);
    EXPECT_EQ(res.rows[0].config.k, 2);
    EXPECT_EQ(res.rows[2].config.k, 4);
    EXPECT_EQ(res.rows[3].config.eta, 0.95);
}

TEST(Sweep, bytes_independent_of_worker_count) {
    SweepGrid g;
    g.base = base(ProtocolId::SimpleOneWay);
    g.base.runs = 5;
    g.base.eta = 0.9;
    g.shots = std::vector<std::uint64_t>{10, 100, 1000};
    g.T = std::vector<double>{0.3, 0.5, 0.7};
    std::string one = run_sweep(g, 1).to_csv();
    EXPECT_EQ(one, run_sweep(g, 4).to_csv());
    EXPECT_EQ(one, run_sweep(g, 9).to_csv());
}

TEST(Sweep, partial_failures_recorded) {
    SweepGrid g;
    g.base = base(ProtocolId::SimpleOneWay);
    g.base.runs = 2;
    g.T = std::vector<double>{0.5, 0.05};
    auto res = run_sweep(g, 1);
    ASSERT_EQ(res.rows.size(), 2u);
    EXPECT_TRUE(res.rows[0].error.empty());
    EXPECT_NE(res.rows[1].error.find("fringe"), std::string::npos);
    EXPECT_EQ(res.rows[1].failure_rate, 1.0);
}

TEST(Sweep, empty_grid_rejected) {
    SweepGrid g;
    g.base = base(ProtocolId::Improved);
    g.k = std::vector<int>{};
    EXPECT_THROW(run_sweep(g, 1), ConfigError);
}

TEST(Sweep, every_row_carries_fingerprint) {
    SweepGrid g;
    g.base = base(ProtocolId::Improved);
    g.k = std::vector<int>{2, 3};
    auto res = run_sweep(g, 1);
    std::string csv = res.to_csv();
    for (const auto &row : res.rows) {
        EXPECT_EQ(row.fingerprint, fingerprint(row.config));
        EXPECT_NE(csv.find(row.fingerprint), std::string::npos);
    }
}

TEST(Fig1, header_and_values) {
    auto rows = fig1_rows({0.9, 0.99}, 12, {});
    ASSERT_EQ(rows.size(), 24u);
    std::string csv = fig1_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "eta,k,cost_improved,cost_sql,ratio");
    for (const auto &r : rows) {
        double eps = std::ldexp(1.0, -r.k);
        ASSERT_NEAR(r.cost_improved / oracle::lossy_improved(r.k, eps, r.eta), 1.0, 1e-12);
        ASSERT_NEAR(r.cost_sql / oracle::lossy_sql(r.k, eps, r.eta), 1.0, 1e-12);
        ASSERT_DOUBLE_EQ(r.ratio, r.cost_improved / r.cost_sql);
    }
    EXPECT_EQ(csv, fig1_csv(fig1_rows({0.9, 0.99}, 12, {})));
}

TEST(Fig1, full_precision_round_trip) {
    auto rows = fig1_rows({0.999}, 5, {false, 0.01});
    std::string csv = fig1_csv(rows);
    std::string second = csv.substr(csv.find("\r\n") + 2);
    second = second.substr(0, second.find("\r\n"));
    auto last_comma = second.rfind(',');
    EXPECT_EQ(std::stod(second.substr(last_comma + 1)), rows[0].ratio);
}

TEST(Fig1, crossover_increases_with_channel_quality) {
    auto rows = fig1_rows({0.9, 0.99, 0.999, 1.0}, 20, {});
    auto k9 = crossover_k(rows, 0.9);
    auto k99 = crossover_k(rows, 0.99);
    auto k999 = crossover_k(rows, 0.999);
    ASSERT_TRUE(k9 && k99 && k999);
    EXPECT_LT(*k9, *k99);
    EXPECT_LT(*k99, *k999);
    EXPECT_FALSE(crossover_k(rows, 1.0).has_value());
}

TEST(Fig1, rejects_bad_eta) {
    EXPECT_THROW(fig1_rows({0.0}, 5, {}), ConfigError);
    EXPECT_THROW(fig1_rows({1.2}, 5, {}), ConfigError);
}

TEST(Csv, rfc4180_quoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_line({"a", "b\nc"}), "a,\"b\nc\"\r\n");
}

TEST(Csv, numbers_round_trip) {
    for (double v : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -2.5}) {
        EXPECT_EQ(std::stod(csv_number(v)), v);
    }
    EXPECT_EQ(csv_number(std::nan("")), "nan");
}

TEST(Selftest, fresh_build_passes) {
    auto results = selftest::run();
    for (const auto &r : results) {
        EXPECT_TRUE(r.passed) << r.module << ": " << r.property << " " << r.detail;
    }
}

TEST(Selftest, mutated_expected_bounces_is_caught) {
    selftest::Options opts;
    opts.expected_bounces = [](std::uint64_t m, double eta) {
        return (std::pow(eta, -static_cast<double>(m)) - 1.0) / (1.0 - eta * eta);
    };
    bool caught = false;
    for (const auto &r : selftest::run(opts)) {
        if (!r.passed && r.module == "channel" && r.property.find("E_B") != std::string::npos) {
            caught = true;
        }
    }
    EXPECT_TRUE(caught);
}
