#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "tqsync/protocols.hpp"
#include "tqsync/simulator.hpp"

namespace tqsync {

/// The physical world behind a QubitLink: owns the truth, the channel and
/// the random streams, and evolves each requested circuit as a statevector in
/// Alice's frame. Bob's operations enter through frame_conjugate.
///
/// A given circuit always ends in the same pre-measurement state, so states
/// are cached per (kind, size, quadrature shift) and each shot only draws the
/// measurement outcome.
class Testbed final : public QubitLink {
public:
    Testbed(const TruthModel &truth, const LossyChannel &channel, const RngStream &rng);

    double omega() const override { return truth_.omega; }
    int one_way_shot() override;
    int bounce_shot(std::uint64_t bounces, double quadrature_shift) override;
    int ghz_shot(std::uint64_t qubits, double quadrature_shift) override;
    const TransmissionLog &log() const override { return log_; }

    const LossyChannel &channel() const { return channel_; }

    /// Pre-measurement states, exposed for tests.
    PureQubit one_way_state() const;
    PureQubit bounce_state(std::uint64_t bounces, double quadrature_shift) const;

private:
    TruthModel truth_;
    PhaseAngle phi_ba_;
    LossyChannel channel_;
    RngStream channel_rng_;
    RngStream measure_rng_;
    TransmissionLog log_;
    PureQubit one_way_final_;
    std::map<std::pair<std::uint64_t, double>, PureQubit> bounce_cache_;
    std::map<std::pair<std::uint64_t, double>, double> ghz_cache_;
};

}  // namespace tqsync
