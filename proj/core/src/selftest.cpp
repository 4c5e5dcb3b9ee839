#include "tqsync/selftest.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "tqsync/channel.hpp"
#include "tqsync/cost_model.hpp"
#include "tqsync/frames_gates.hpp"
#include "tqsync/harness.hpp"
#include "tqsync/protocols.hpp"
#include "tqsync/simulator.hpp"
#include "tqsync/testbed.hpp"

namespace tqsync::selftest {

namespace {

class Suite {
public:
    explicit Suite(const Options &opts) : opts_(opts), rng_(opts.seed) {}

    void check(const std::string &module, const std::string &property, bool ok, const std::string &detail = {}) {
        results_.push_back({module, property, ok, detail});
    }

    template <typename F>
    void guarded(const std::string &module, const std::string &property, F &&body) {
        try {
            body();
        } catch (const std::exception &e) {
            check(module, property, false, std::string("threw: ") + e.what());
        }
    }

    double eb(std::uint64_t m, double eta) const {
        return opts_.expected_bounces ? opts_.expected_bounces(m, eta) : expected_bounces(m, eta);
    }

    RngStream stream(const char *name) const { return rng_.child(name); }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    Options opts_;
    RngStream rng_;
    std::vector<CheckResult> results_;
};

std::string num(double v) { return harness::csv_number(v); }

void frames(Suite &s) {
    s.guarded("frames_gates", "rabi_pulse unitary", [&] {
        RngStream r = s.stream("rabi");
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double k = 4.0 * r.uniform();
            PhaseAngle phi(kTwoPi * r.uniform());
            worst = std::max(worst, rabi_pulse(k, phi, Party::Alice).unitarity_error());
        }
        s.check("frames_gates", "rabi_pulse unitary", worst < 1e-12, "max error " + num(worst));
    });
    s.guarded("frames_gates", "cross-frame composition rejected", [&] {
        bool threw = false;
        try {
            (void)(pauli_x_op(Party::Alice) * pauli_x_op(Party::Bob));
        } catch (const FrameMismatch &) {
            threw = true;
        }
        s.check("frames_gates", "cross-frame composition rejected", threw);
    });
    s.guarded("frames_gates", "bounce equals X_A X_B", [&] {
        PhaseAngle phi(0.8123);
        Unitary2 xx = pauli_x_op(Party::Alice) * frame_conjugate(pauli_x_op(Party::Bob), phi);
        double d = distance_up_to_global_phase(xx, bounce_unitary(1, phi));
        s.check("frames_gates", "bounce equals X_A X_B", d < 1e-12, "distance " + num(d));
    });
    s.guarded("frames_gates", "frame covariance", [&] {
        RngStream r = s.stream("covariance");
        double worst = 0.0;
        for (int c = 0; c < 100; ++c) {
            PhaseAngle phi(kTwoPi * r.uniform());
            PureQubit bob = PureQubit::excited(Party::Bob);
            PureQubit alice = frame_shift_state(bob, phi);
            for (int g = 0; g < 6; ++g) {
                Unitary2 u = rabi_pulse(4.0 * r.uniform(), PhaseAngle(kTwoPi * r.uniform()), Party::Bob);
                bob = apply(u, bob);
                alice = apply(frame_conjugate(u, phi), alice);
            }
            worst = std::max(worst, std::abs(bob.prob_plus_one() - alice.prob_plus_one()));
        }
        s.check("frames_gates", "frame covariance", worst < 1e-12, "max difference " + num(worst));
    });
}

void simulator(Suite &s) {
    s.guarded("simulator", "GHZ parity equals cos(M phi)", [&] {
        RngStream r = s.stream("ghz");
        double worst = 0.0;
        for (int M = 1; M <= 8; ++M) {
            for (int i = 0; i < 5; ++i) {
                double phi = kTwoPi * r.uniform();
                worst = std::max(worst, std::abs(ghz_parity_expectation(M, PhaseAngle(phi)) - std::cos(M * phi)));
            }
        }
        s.check("simulator", "GHZ parity equals cos(M phi)", worst < 1e-10, "max error " + num(worst));
    });
    s.guarded("simulator", "one-way fringe cos(phi)", [&] {
        double worst = 0.0;
        for (double T : {0.0, 0.2, 0.5, 0.9}) {
            TruthModel truth = TruthModel::from_half_turns(1.0, T);
            Testbed bed(truth, LossyChannel::lossless(), RngStream(1));
            double mean = 2.0 * bed.one_way_state().prob_plus_one() - 1.0;
            worst = std::max(worst, std::abs(mean - std::cos(T * kPi)));
        }
        s.check("simulator", "one-way fringe cos(phi)", worst < 1e-12, "max error " + num(worst));
    });
}

void channel(Suite &s) {
    const double etas[] = {0.5, 0.9, 0.99};
    s.guarded("channel", "E_B recurrence", [&] {
        double worst = 0.0;
        for (double eta : etas) {
            // E_B(m) = (E_B(m-1) + 1) / eta^2 with E_B(0) = 0.
            double e = 0.0;
            for (std::uint64_t m = 1; m <= 16; ++m) {
                e = (e + 1.0) / (eta * eta);
                worst = std::max(worst, std::abs(s.eb(m, eta) - e) / e);
            }
        }
        s.check("channel", "E_B recurrence", worst < 1e-12, "max relative error " + num(worst));
    });
    s.guarded("channel", "E_B Monte Carlo", [&] {
        RngStream r = s.stream("bounces");
        std::string worst_case;
        double worst_z = 0.0;
        for (double eta : etas) {
            for (std::uint64_t m : {1u, 4u}) {
                LossyChannel ch(eta);
                const int runs = 2000;
                double sum = 0.0;
                double sum_sq = 0.0;
                for (int i = 0; i < runs; ++i) {
                    TransmissionLog log;
                    double a = static_cast<double>(run_coherent_bounces(m, ch, r, log));
                    sum += a;
                    sum_sq += a * a;
                }
                double mean = sum / runs;
                double se = std::sqrt(std::max(0.0, sum_sq / runs - mean * mean) / runs);
                double z = std::abs(mean - s.eb(m, eta)) / std::max(se, 1e-12);
                if (z > worst_z) {
                    worst_z = z;
                    worst_case = "m=" + std::to_string(m) + " eta=" + num(eta) + " mean=" + num(mean) +
                                 " closed form=" + num(s.eb(m, eta));
                }
            }
        }
        s.check("channel", "E_B Monte Carlo", worst_z < 4.5, "worst |z|=" + num(worst_z) + " at " + worst_case);
    });
}

void costs(Suite &s) {
    s.guarded("cost_model", "lossless limit", [&] {
        double worst = 0.0;
        for (int k = 1; k <= 12; ++k) {
            double eps = std::ldexp(1.0, -k);
            worst = std::max(worst, std::abs(cost::lossy_improved_cost(k, eps, 1.0) / cost::improved_cost(k, eps) - 1));
            worst = std::max(worst, std::abs(cost::lossy_sql_cost(k, eps, 1.0) / cost::sql_one_way_cost(k, eps) - 1));
        }
        s.check("cost_model", "lossless limit", worst < 1e-12, "max relative error " + num(worst));
    });
    s.guarded("cost_model", "lossy improved uses E_B", [&] {
        double worst = 0.0;
        for (double eta : {0.9, 0.99}) {
            for (int k = 1; k <= 10; ++k) {
                double sum = 0.0;
                for (int j = 0; j < k; ++j) {
                    sum += s.eb(std::uint64_t{1} << j, eta);
                }
                double expect = 64.0 * std::log(2.0 * k / 0.01) * sum;
                worst = std::max(worst, std::abs(cost::lossy_improved_cost(k, 0.01, eta) / expect - 1.0));
            }
        }
        s.check("cost_model", "lossy improved uses E_B", worst < 1e-12, "max relative error " + num(worst));
    });
    s.guarded("cost_model", "hybrid degenerates at k1=k", [&] {
        double a = cost::hybrid_cost(6, 6, 0.05, 0.95);
        double b = cost::lossy_improved_cost(6, 0.025, 0.95);
        s.check("cost_model", "hybrid degenerates at k1=k", a == b, num(a) + " vs " + num(b));
    });
}

void protocols(Suite &s) {
    s.guarded("protocols", "lossless send identity", [&] {
        std::string bad;
        for (int k = 1; k <= 4; ++k) {
            TruthModel truth = TruthModel::from_half_turns(1.0, 0.37);
            auto rep = improved_estimate(truth, k, 0.1, QuadratureMode::PaperCosineOnly, LossyChannel::lossless(),
                                         s.stream("sends").child("k", static_cast<std::uint64_t>(k)));
            std::uint64_t n = cost::repetitions_per_bit(k, 0.1);
            std::uint64_t expect = 2 * n * ((std::uint64_t{1} << k) - 1);
            if (rep.total_one_way_sends != expect) {
                bad += " k=" + std::to_string(k) + ":" + std::to_string(rep.total_one_way_sends);
            }
        }
        s.check("protocols", "lossless send identity", bad.empty(), bad);
    });
    s.guarded("protocols", "improved recovers bits", [&] {
        const int runs = 40;
        int ok = 0;
        RngStream r = s.stream("improved");
        for (int i = 0; i < runs; ++i) {
            RngStream run = r.child("run", static_cast<std::uint64_t>(i));
            RngStream tr = run.child("truth");
            TruthModel truth = TruthModel::from_half_turns(1.0, tr.uniform());
            auto rep = improved_estimate(truth, 4, 1.0 / 16, QuadratureMode::TwoQuadrature, LossyChannel::lossless(),
                                         run.child("protocol"));
            ok += rep.abs_error_t && *rep.abs_error_t <= kPi / 16 ? 1 : 0;
        }
        s.check("protocols", "improved recovers bits", ok >= runs - 3,
                std::to_string(ok) + "/" + std::to_string(runs) + " within the precision cell");
    });
}

void harness_checks(Suite &s) {
    s.guarded("harness_cli", "eta=0 rejected", [&] {
        harness::ExperimentConfig cfg;
        cfg.eta = 0.0;
        cfg.seed = 1;
        bool rejected = false;
        try {
            harness::validate(cfg);
        } catch (const harness::ConfigError &) {
            rejected = true;
        }
        s.check("harness_cli", "eta=0 rejected", rejected);
    });
    s.guarded("harness_cli", "run_single deterministic", [&] {
        harness::ExperimentConfig cfg;
        cfg.k = 4;
        cfg.eps = 0.1;
        cfg.seed = 7;
        auto a = harness::run_single(cfg);
        auto b = harness::run_single(cfg);
        s.check("harness_cli", "run_single deterministic", a.json == b.json && a.csv == b.csv);
    });
    s.guarded("harness_cli", "sweep independent of workers", [&] {
        harness::SweepGrid grid;
        grid.base.protocol = harness::ProtocolId::Improved;
        grid.base.seed = 11;
        grid.base.runs = 3;
        grid.base.T = {0.0, 1.0};
        grid.base.eps = 0.2;
        grid.k = std::vector<int>{2, 3};
        grid.eta = std::vector<double>{1.0, 0.95};
        auto one = harness::run_sweep(grid, 1).to_csv();
        auto many = harness::run_sweep(grid, 3).to_csv();
        s.check("harness_cli", "sweep independent of workers", one == many);
    });
}

}  // namespace

std::vector<CheckResult> run(const Options &opts) {
    Suite s(opts);
    frames(s);
    simulator(s);
    channel(s);
    costs(s);
    protocols(s);
    harness_checks(s);
    return s.take();
}

int report(const std::vector<CheckResult> &results, std::ostream &os) {
    int failed = 0;
    for (const auto &r : results) {
        os << (r.passed ? "[PASS] " : "[FAIL] ") << r.module << ": " << r.property;
        if (!r.detail.empty()) {
            os << " (" << r.detail << ")";
        }
        os << "\n";
        failed += r.passed ? 0 : 1;
    }
    os << results.size() - static_cast<size_t>(failed) << "/" << results.size() << " checks passed\n";
    return failed == 0 ? harness::kExitOk : harness::kExitInvariant;
}

}  // namespace tqsync::selftest
