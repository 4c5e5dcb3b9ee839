#include "tqsync/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tqsync/cost_model.hpp"
#include "tqsync/testbed.hpp"

namespace tqsync {

namespace {

constexpr double kSineShift = kPi / 2.0;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

void check_shots(std::uint64_t shots) {
    if (shots == 0) {
        throw std::invalid_argument("shot count must be >= 1");
    }
}

int quadratures_of(QuadratureMode mode) { return mode == QuadratureMode::TwoQuadrature ? 2 : 1; }

void check_bitwise_args(int k, double eps, QuadratureMode mode) {
    if (k < 1) {
        throw std::invalid_argument("bits of precision k=" + std::to_string(k) + " must be >= 1");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("error budget eps=" + std::to_string(eps) + " outside (0, 1)");
    }
    std::uint64_t n = cost::repetitions_per_bit(k, eps);
    int limit = max_bits_for_counter(n, quadratures_of(mode));
    if (k > limit) {
        throw std::invalid_argument("k=" + std::to_string(k) + " overflows the 64-bit send counter; need k <= " +
                                    std::to_string(limit) + " at n=" + std::to_string(n));
    }
}

void check_truth_range(const TruthModel &truth, double upper, const char *who) {
    double phi = truth.phase();
    if (phi < 0.0 || phi > upper * (1.0 + 1e-12)) {
        throw std::domain_error(std::string(who) + ": omega*t_BA=" + std::to_string(phi) + " outside [0, " +
                                std::to_string(upper) + "]");
    }
}

// Shot kernel shared by the bounce-based and GHZ-based bit loops: level j,
// quadrature shift -> +-1.
template <typename Shot>
std::vector<FringeEstimate> measure_levels(QubitLink &link, int k, std::uint64_t n, QuadratureMode mode,
                                           Shot &&shot, std::vector<BitRecord> &records) {
    std::vector<FringeEstimate> levels;
    levels.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        std::uint64_t sends_before = link.log().one_way_sends;
        std::uint64_t restarts_before = link.log().restarts;
        std::int64_t cos_sum = 0;
        for (std::uint64_t r = 0; r < n; ++r) {
            cos_sum += shot(j, 0.0);
        }
        FringeEstimate est;
        est.cos_hat = static_cast<double>(cos_sum) / static_cast<double>(n);
        if (mode == QuadratureMode::TwoQuadrature) {
            std::int64_t sin_sum = 0;
            for (std::uint64_t r = 0; r < n; ++r) {
                sin_sum += shot(j, kSineShift);
            }
            est.sin_hat = static_cast<double>(sin_sum) / static_cast<double>(n);
        }
        BitRecord rec;
        rec.bit_index = j + 1;
        rec.repetitions = n;
        rec.cos_estimate = clamp_unit(est.cos_hat);
        if (est.sin_hat) {
            rec.sin_estimate = clamp_unit(*est.sin_hat);
        }
        rec.sends_used = link.log().one_way_sends - sends_before;
        rec.restarts = link.log().restarts - restarts_before;
        records.push_back(rec);
        levels.push_back(est);
    }
    return levels;
}

void finish_bitwise(ProtocolReport &rep, const std::vector<int> &bits, double omega) {
    rep.bits = bits;
    for (size_t j = 0; j < rep.bit_records.size() && j < bits.size(); ++j) {
        rep.bit_records[j].decided_bit = bits[j];
    }
    rep.estimate_t_ba = assemble_estimate(bits, omega);
    rep.estimate_phi = rep.estimate_t_ba * omega;
}

}  // namespace

TruthModel::TruthModel(double omega_, double t_ba_) : omega(omega_), t_ba(t_ba_) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("omega must be positive and finite");
    }
    if (!std::isfinite(t_ba)) {
        throw std::invalid_argument("t_BA must be finite");
    }
}

std::string_view to_string(QuadratureMode m) {
    return m == QuadratureMode::TwoQuadrature ? "two_quadrature" : "paper_cosine_only";
}

std::optional<QuadratureMode> parse_quadrature_mode(std::string_view s) {
    if (s == "two_quadrature" || s == "two-quadrature" || s == "TwoQuadrature") {
        return QuadratureMode::TwoQuadrature;
    }
    if (s == "paper_cosine_only" || s == "paper-cosine-only" || s == "PaperCosineOnly" || s == "cosine") {
        return QuadratureMode::PaperCosineOnly;
    }
    return std::nullopt;
}

double fraction_from_quadratures(double cos_hat, std::optional<double> sin_hat, QuadratureMode mode) {
    double c = clamp_unit(cos_hat);
    if (mode == QuadratureMode::PaperCosineOnly) {
        return std::acos(c) / kTwoPi;
    }
    if (!sin_hat) {
        throw std::invalid_argument("two-quadrature decision needs a sine estimate");
    }
    double s = clamp_unit(*sin_hat);
    double f = std::atan2(s, c) / kTwoPi;
    if (f < 0.0) {
        f += 1.0;
    }
    return f >= 1.0 ? 0.0 : f;
}

int bit_from_quadratures(double cos_hat, std::optional<double> sin_hat, QuadratureMode mode) {
    double f = fraction_from_quadratures(cos_hat, sin_hat, mode);
    if (mode == QuadratureMode::PaperCosineOnly) {
        return f > 0.25 ? 1 : 0;
    }
    return f >= 0.5 ? 1 : 0;
}

double refine_fraction(std::span<const FringeEstimate> levels, QuadratureMode mode) {
    if (levels.empty()) {
        throw std::invalid_argument("refine_fraction: no levels");
    }
    const size_t last = levels.size() - 1;
    if (mode == QuadratureMode::PaperCosineOnly) {
        double t = 0.0;
        for (size_t j = 0; j < last; ++j) {
            t += std::ldexp(bit_from_quadratures(levels[j].cos_hat, std::nullopt, mode), -static_cast<int>(j + 1));
        }
        double f = fraction_from_quadratures(levels[last].cos_hat, std::nullopt, mode);
        return t + std::ldexp(f, -static_cast<int>(last));
    }
    double cur = fraction_from_quadratures(levels[last].cos_hat, levels[last].sin_hat, mode);
    for (size_t j = last; j-- > 0;) {
        const auto &lv = levels[j];
        if (!lv.sin_hat) {
            throw std::invalid_argument("two-quadrature decision needs a sine estimate");
        }
        // Candidates for frac(2^j T) are cur/2 and (1 + cur)/2; centre the
        // decision boundary between them.
        double theta = kTwoPi * (cur / 2.0 - 0.25);
        double c = clamp_unit(lv.cos_hat);
        double s = clamp_unit(*lv.sin_hat);
        double rc = c * std::cos(theta) + s * std::sin(theta);
        double rs = s * std::cos(theta) - c * std::sin(theta);
        int b = bit_from_quadratures(rc, rs, mode);
        cur = (b + cur) / 2.0;
    }
    return cur;
}

std::vector<int> leading_bits(double T, int k) {
    if (k < 0) {
        throw std::invalid_argument("leading_bits: negative bit count");
    }
    double x = T - std::floor(T);
    std::vector<int> bits;
    bits.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        x *= 2.0;
        int b = x >= 1.0 ? 1 : 0;
        x -= b;
        bits.push_back(b);
    }
    return bits;
}

double assemble_estimate(std::span<const int> bits, double omega) {
    if (bits.empty()) {
        throw std::invalid_argument("assemble_estimate: need at least one bit");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("assemble_estimate: omega must be positive");
    }
    double T = 0.0;
    int i = 1;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("assemble_estimate: bits must be 0 or 1");
        }
        T += std::ldexp(static_cast<double>(b), -i);
        ++i;
    }
    T += std::ldexp(1.0, -static_cast<int>(bits.size() + 1));
    return kPi / omega * T;
}

int select_k1(double eta, int k, double eps) { return cost::optimal_k1(k, eps, eta); }

int max_bits_for_counter(std::uint64_t repetitions, int quadratures) {
    constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 4;
    int best = 0;
    for (int k = 1; k <= 61; ++k) {
        // quadratures * n * 2 * (2^k - 1) sends, lossless.
        long double sends = static_cast<long double>(quadratures) * static_cast<long double>(repetitions) * 2.0L *
                            (std::ldexp(1.0L, k) - 1.0L);
        if (sends > static_cast<long double>(kCap)) {
            break;
        }
        best = k;
    }
    return best;
}

ProtocolReport run_simple_one_way(QubitLink &link, std::uint64_t shots) {
    check_shots(shots);
    ProtocolReport rep;
    rep.protocol = "simple_one_way";
    rep.mode = QuadratureMode::PaperCosineOnly;
    std::uint64_t before = link.log().one_way_sends;
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        sum += link.one_way_shot();
    }
    double mean = static_cast<double>(sum) / static_cast<double>(shots);
    rep.mean_outcome = mean;
    rep.estimate_phi = std::acos(clamp_unit(mean));
    rep.estimate_t_ba = rep.estimate_phi / link.omega();
    rep.shots = shots;
    rep.total_one_way_sends = link.log().one_way_sends - before;
    rep.simple_phase_sends = rep.total_one_way_sends;
    rep.closed_form_sends = static_cast<double>(shots);
    rep.restarts = link.log().restarts;
    rep.lost = link.log().lost;
    return rep;
}

ProtocolReport run_simple_two_way(QubitLink &link, std::uint64_t shots) {
    check_shots(shots);
    ProtocolReport rep;
    rep.protocol = "simple_two_way";
    rep.mode = QuadratureMode::PaperCosineOnly;
    std::uint64_t before = link.log().one_way_sends;
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        sum += link.bounce_shot(1, 0.0);
    }
    double mean = static_cast<double>(sum) / static_cast<double>(shots);
    rep.mean_outcome = mean;
    rep.estimate_phi = std::acos(clamp_unit(mean)) / 2.0;
    rep.estimate_t_ba = rep.estimate_phi / link.omega();
    rep.shots = shots;
    rep.total_one_way_sends = link.log().one_way_sends - before;
    rep.simple_phase_sends = rep.total_one_way_sends;
    rep.closed_form_sends = 2.0 * static_cast<double>(shots);
    rep.restarts = link.log().restarts;
    rep.lost = link.log().lost;
    return rep;
}

namespace {

std::vector<int> decode_bits(std::span<const FringeEstimate> levels, QuadratureMode mode) {
    if (mode == QuadratureMode::TwoQuadrature) {
        return leading_bits(refine_fraction(levels, mode), static_cast<int>(levels.size()));
    }
    std::vector<int> bits;
    for (const auto &lv : levels) {
        bits.push_back(bit_from_quadratures(lv.cos_hat, std::nullopt, mode));
    }
    return bits;
}

template <typename Shot>
ProtocolReport run_bitwise(QubitLink &link, const char *name, int k, double eps, QuadratureMode mode,
                           Shot &&shot) {
    check_bitwise_args(k, eps, mode);
    std::uint64_t n = cost::repetitions_per_bit(k, eps);
    ProtocolReport rep;
    rep.protocol = name;
    rep.mode = mode;
    std::uint64_t before = link.log().one_way_sends;
    std::uint64_t restarts_before = link.log().restarts;
    std::uint64_t lost_before = link.log().lost;
    auto levels = measure_levels(link, k, n, mode, shot, rep.bit_records);
    finish_bitwise(rep, decode_bits(levels, mode), link.omega());
    rep.shots = n * static_cast<std::uint64_t>(k * quadratures_of(mode));
    rep.total_one_way_sends = link.log().one_way_sends - before;
    rep.restarts = link.log().restarts - restarts_before;
    rep.lost = link.log().lost - lost_before;
    rep.closed_form_sends = 2.0 * static_cast<double>(n) * (std::ldexp(1.0, k) - 1.0);
    return rep;
}

}  // namespace

ProtocolReport run_improved(QubitLink &link, int k, double eps, QuadratureMode mode) {
    return run_bitwise(link, "improved", k, eps, mode, [&link](int j, double shift) {
        return link.bounce_shot(std::uint64_t{1} << j, shift);
    });
}

ProtocolReport run_entangled_bitwise(QubitLink &link, int k, double eps, QuadratureMode mode) {
    // Bit t_{j+1} uses a 2^{j+1}-qubit GHZ state: the same 2^{j+1} one-way
    // qubit transits as 2^j bounces, and the same fringe cos(2^{j+1} phi).
    return run_bitwise(link, "entangled_bitwise", k, eps, mode, [&link](int j, double shift) {
        return link.ghz_shot(std::uint64_t{2} << j, shift);
    });
}

ProtocolReport run_entangled_oneshot(QubitLink &link, std::uint64_t qubits, std::uint64_t shots) {
    check_shots(shots);
    if (qubits == 0) {
        throw std::invalid_argument("entangled_oneshot: need at least one qubit");
    }
    ProtocolReport rep;
    rep.protocol = "entangled_oneshot";
    rep.mode = QuadratureMode::PaperCosineOnly;
    std::uint64_t before = link.log().one_way_sends;
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        sum += link.ghz_shot(qubits, 0.0);
    }
    double mean = static_cast<double>(sum) / static_cast<double>(shots);
    rep.mean_outcome = mean;
    rep.estimate_phi = std::acos(clamp_unit(mean)) / static_cast<double>(qubits);
    rep.estimate_t_ba = rep.estimate_phi / link.omega();
    rep.shots = shots;
    rep.total_one_way_sends = link.log().one_way_sends - before;
    rep.simple_phase_sends = rep.total_one_way_sends;
    rep.closed_form_sends = static_cast<double>(qubits) * static_cast<double>(shots);
    rep.restarts = link.log().restarts;
    rep.lost = link.log().lost;
    return rep;
}

ProtocolReport run_hybrid(QubitLink &link, int k1, int k, double eps, QuadratureMode mode) {
    if (k1 < 1 || k1 > k) {
        throw std::invalid_argument("hybrid: need 1 <= k1 <= k, got k1=" + std::to_string(k1) +
                                    " k=" + std::to_string(k));
    }
    // Phase 1 budget eps/2; phase 2 gets the other half.
    ProtocolReport rep = run_improved(link, k1, eps / 2.0, mode);
    rep.protocol = "hybrid";
    rep.k1 = k1;
    std::uint64_t shots = cost::hybrid_phase2_shots(k1, k, eps);
    if (shots == 0) {
        return rep;
    }
    const std::uint64_t bounces = std::uint64_t{1} << k1;
    std::uint64_t before = link.log().one_way_sends;
    std::uint64_t restarts_before = link.log().restarts;
    std::uint64_t lost_before = link.log().lost;
    std::int64_t cos_sum = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        cos_sum += link.bounce_shot(bounces, 0.0);
    }
    FringeEstimate fine;
    fine.cos_hat = static_cast<double>(cos_sum) / static_cast<double>(shots);
    if (mode == QuadratureMode::TwoQuadrature) {
        std::int64_t sin_sum = 0;
        for (std::uint64_t i = 0; i < shots; ++i) {
            sin_sum += link.bounce_shot(bounces, kSineShift);
        }
        fine.sin_hat = static_cast<double>(sin_sum) / static_cast<double>(shots);
    }
    std::vector<FringeEstimate> levels;
    for (const auto &rec : rep.bit_records) {
        levels.push_back({rec.cos_estimate, rec.sin_estimate});
    }
    levels.push_back(fine);
    // The fine fringe sits at level k1; walking down from it re-derives the
    // phase-1 bits consistently and places the residual in its cell.
    double T = refine_fraction(levels, mode);
    finish_bitwise(rep, leading_bits(T, k), link.omega());

    rep.simple_phase_sends = link.log().one_way_sends - before;
    rep.total_one_way_sends += rep.simple_phase_sends;
    rep.restarts += link.log().restarts - restarts_before;
    rep.lost += link.log().lost - lost_before;
    rep.shots += shots * static_cast<std::uint64_t>(quadratures_of(mode));
    *rep.closed_form_sends += static_cast<double>(shots) * 2.0 * static_cast<double>(bounces);
    return rep;
}

ProtocolReport simple_one_way(const TruthModel &truth, std::uint64_t shots, const LossyChannel &ch, RngStream rng) {
    Testbed bed(truth, ch, rng);
    ProtocolReport rep = run_simple_one_way(bed, shots);
    rep.count_lost_sends = ch.count_lost_sends();
    grade(rep, truth);
    return rep;
}

ProtocolReport simple_two_way(const TruthModel &truth, std::uint64_t shots, const LossyChannel &ch, RngStream rng) {
    Testbed bed(truth, ch, rng);
    ProtocolReport rep = run_simple_two_way(bed, shots);
    rep.count_lost_sends = ch.count_lost_sends();
    grade(rep, truth);
    return rep;
}

ProtocolReport improved_estimate(const TruthModel &truth, int k, double eps, QuadratureMode mode,
                                 const LossyChannel &ch, RngStream rng) {
    check_truth_range(truth, kPi, "improved_estimate");
    Testbed bed(truth, ch, rng);
    ProtocolReport rep = run_improved(bed, k, eps, mode);
    rep.count_lost_sends = ch.count_lost_sends();
    grade(rep, truth);
    return rep;
}

ProtocolReport entangled_oneshot(const TruthModel &truth, std::uint64_t qubits, std::uint64_t shots, RngStream rng) {
    if (qubits == 0) {
        throw std::invalid_argument("entangled_oneshot: need at least one qubit");
    }
    check_truth_range(truth, kPi / static_cast<double>(qubits), "entangled_oneshot");
    Testbed bed(truth, LossyChannel::lossless(), rng);
    ProtocolReport rep = run_entangled_oneshot(bed, qubits, shots);
    grade(rep, truth);
    return rep;
}

ProtocolReport entangled_bitwise(const TruthModel &truth, int k, double eps, QuadratureMode mode,
                                 const LossyChannel &ch, RngStream rng) {
    check_truth_range(truth, kPi, "entangled_bitwise");
    Testbed bed(truth, ch, rng);
    ProtocolReport rep = run_entangled_bitwise(bed, k, eps, mode);
    rep.count_lost_sends = ch.count_lost_sends();
    grade(rep, truth);
    return rep;
}

ProtocolReport hybrid_estimate(const TruthModel &truth, std::optional<int> k1, int k, double eps,
                               QuadratureMode mode, const LossyChannel &ch, RngStream rng) {
    check_truth_range(truth, kPi, "hybrid_estimate");
    int chosen = k1 ? *k1 : select_k1(ch.eta(), k, eps);
    Testbed bed(truth, ch, rng);
    ProtocolReport rep = run_hybrid(bed, chosen, k, eps, mode);
    rep.count_lost_sends = ch.count_lost_sends();
    grade(rep, truth);
    return rep;
}

void grade(ProtocolReport &report, const TruthModel &truth) {
    report.abs_error_t = std::abs(report.estimate_t_ba - truth.t_ba);
    if (!report.bits.empty()) {
        auto expected = leading_bits(truth.half_turns(), static_cast<int>(report.bits.size()));
        report.bits_correct = expected == report.bits;
        report.succeeded = report.bits_correct;
    }
}

}  // namespace tqsync
