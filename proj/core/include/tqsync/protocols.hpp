#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tqsync/channel.hpp"
#include "tqsync/phase.hpp"
#include "tqsync/rng.hpp"

namespace tqsync {

/// Hidden ground truth: qubit frequency and Bob's clock offset from Alice.
/// Only the harness and the Testbed ever look inside.
struct TruthModel {
    double omega = 1.0;
    double t_ba = 0.0;

    TruthModel(double omega, double t_ba);

    static TruthModel from_half_turns(double omega, double T) { return TruthModel(omega, T * kPi / omega); }

    /// omega * t_BA, un-wrapped.
    double phase() const { return omega * t_ba; }
    /// omega * t_BA / pi.
    double half_turns() const { return phase() / kPi; }
};

enum class QuadratureMode {
    /// Only the cosine fringe is measured; bits decided by |T_hat - T| <= 1/4.
    PaperCosineOnly,
    /// Cosine and sine fringes; bits decided from atan2 with coarse-to-fine
    /// consistency.
    TwoQuadrature,
};

std::string_view to_string(QuadratureMode m);
std::optional<QuadratureMode> parse_quadrature_mode(std::string_view s);

/// Everything a protocol may do to the physical world. Protocol code gets a
/// reference to this and nothing else, so it cannot peek at the offset.
class QubitLink {
public:
    virtual ~QubitLink() = default;

    /// Public knowledge: the ticking frequency of the qubits.
    virtual double omega() const = 0;

    /// Alice prepares H_A|0>, sends it (re-sent until delivered), Bob applies
    /// H_B and measures -Z. Returns the +-1 outcome.
    virtual int one_way_shot() = 0;

    /// Alice prepares H_A|0>, the qubit bounces m times through X_B and X_A
    /// (the chain restarts on any loss), Alice applies
    /// z_rotation(quadrature_shift), H_A and measures -Z. The mean is
    /// cos(2 m phi_BA - quadrature_shift).
    virtual int bounce_shot(std::uint64_t bounces, double quadrature_shift) = 0;

    /// Alice sends an M-qubit GHZ state (re-sent until the whole bundle
    /// arrives); Bob measures (-1)^M Z^{(x)M} after H_B on every qubit. The mean
    /// is cos(M phi_BA - quadrature_shift).
    virtual int ghz_shot(std::uint64_t qubits, double quadrature_shift) = 0;

    virtual const TransmissionLog &log() const = 0;
};

/// One estimated bit t_j of T = omega t_BA / pi = 0.t_1 t_2 ...
struct BitRecord {
    int bit_index = 0;  // 1-based
    std::uint64_t repetitions = 0;
    double cos_estimate = 0.0;
    std::optional<double> sin_estimate;
    int decided_bit = 0;
    std::uint64_t sends_used = 0;
    std::uint64_t restarts = 0;
};

struct ProtocolReport {
    std::string protocol;
    QuadratureMode mode = QuadratureMode::TwoQuadrature;
    bool count_lost_sends = true;

    double estimate_t_ba = 0.0;
    double estimate_phi = 0.0;  // in [0, pi]
    std::optional<double> mean_outcome;

    std::uint64_t total_one_way_sends = 0;
    /// Sends outside the per-bit rounds: simple-protocol shots or hybrid phase 2.
    std::uint64_t simple_phase_sends = 0;
    std::uint64_t shots = 0;
    std::uint64_t restarts = 0;
    std::uint64_t lost = 0;

    /// Closed-form lossless count under the literal cosine-only accounting.
    std::optional<double> closed_form_sends;

    std::vector<BitRecord> bit_records;
    std::vector<int> bits;
    std::optional<int> k1;

    // Harness-computed against the truth.
    std::optional<double> abs_error_t;
    std::optional<bool> bits_correct;
    std::optional<bool> succeeded;
};

/// Mean of a fringe pair as the fraction of a turn it encodes.
/// TwoQuadrature: atan2(s, c)/(2pi) in [0, 1). PaperCosineOnly: arccos(c)/(2pi)
/// in [0, 1/2]. Inputs are clamped to [-1, 1].
double fraction_from_quadratures(double cos_hat, std::optional<double> sin_hat, QuadratureMode mode);

/// TwoQuadrature: 1 iff the fraction is >= 1/2. PaperCosineOnly: 1 iff the
/// fraction exceeds 1/4.
int bit_from_quadratures(double cos_hat, std::optional<double> sin_hat, QuadratureMode mode);

struct FringeEstimate {
    double cos_hat = 0.0;
    std::optional<double> sin_hat;
};

/// Turns per-level fringe estimates (level j estimates frac(2^j T)) into an
/// estimate of T in [0, 1).
///
/// TwoQuadrature starts from the finest level and walks down: each coarser
/// level's fringe is rotated by the phase implied by the finer result and its
/// bit decided with bit_from_quadratures. PaperCosineOnly decides every
/// level independently and appends the finest fraction below the last bit.
double refine_fraction(std::span<const FringeEstimate> levels, QuadratureMode mode);

/// First `k` binary digits of T in [0, 1).
std::vector<int> leading_bits(double T, int k);

/// (pi/omega) (0.t_1...t_k + 2^{-(k+1)}): the midpoint of the precision cell.
double assemble_estimate(std::span<const int> bits, double omega);

/// k1 in [1, k] minimising the analytic hybrid cost; ties go to larger k1.
int select_k1(double eta, int k, double eps);

/// Largest k the bitwise protocols accept before the send counter could
/// overflow, for the given repetitions per bit and quadrature count.
int max_bits_for_counter(std::uint64_t repetitions, int quadratures);

// Protocol procedures. They see only the link.

ProtocolReport run_simple_one_way(QubitLink &link, std::uint64_t shots);
ProtocolReport run_simple_two_way(QubitLink &link, std::uint64_t shots);
ProtocolReport run_improved(QubitLink &link, int k, double eps, QuadratureMode mode);
ProtocolReport run_entangled_oneshot(QubitLink &link, std::uint64_t qubits, std::uint64_t shots);
ProtocolReport run_entangled_bitwise(QubitLink &link, int k, double eps, QuadratureMode mode);
ProtocolReport run_hybrid(QubitLink &link, int k1, int k, double eps, QuadratureMode mode);

// Harness-facing entry points: build a Testbed around the truth, run, grade.
// Range preconditions that only the truth can check are enforced here, except
// the simple protocols' fringe, which the experiment config validates.

ProtocolReport simple_one_way(const TruthModel &truth, std::uint64_t shots, const LossyChannel &ch, RngStream rng);
ProtocolReport simple_two_way(const TruthModel &truth, std::uint64_t shots, const LossyChannel &ch, RngStream rng);
ProtocolReport improved_estimate(const TruthModel &truth, int k, double eps, QuadratureMode mode,
                                 const LossyChannel &ch, RngStream rng);
ProtocolReport entangled_oneshot(const TruthModel &truth, std::uint64_t qubits, std::uint64_t shots, RngStream rng);
ProtocolReport entangled_bitwise(const TruthModel &truth, int k, double eps, QuadratureMode mode,
                                 const LossyChannel &ch, RngStream rng);
ProtocolReport hybrid_estimate(const TruthModel &truth, std::optional<int> k1, int k, double eps,
                               QuadratureMode mode, const LossyChannel &ch, RngStream rng);

/// Fills abs_error_t and, for bitwise reports, bits_correct / succeeded.
void grade(ProtocolReport &report, const TruthModel &truth);

}  // namespace tqsync
