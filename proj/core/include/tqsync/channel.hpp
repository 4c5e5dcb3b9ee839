#pragma once

#include <cstdint>

#include "tqsync/rng.hpp"

namespace tqsync {

/// Erasure channel between Alice and Bob. Each one-way transmission survives
/// independently with probability eta; losses are heralded.
class LossyChannel {
public:
    explicit LossyChannel(double eta, bool count_lost_sends = true);

    static LossyChannel lossless() { return LossyChannel(1.0); }

    double eta() const { return eta_; }
    bool lossless_channel() const { return eta_ == 1.0; }
    /// Whether a transmission that is lost still counts as a communication.
    bool count_lost_sends() const { return count_lost_sends_; }

private:
    double eta_;
    bool count_lost_sends_;
};

/// Running totals for one protocol run. Counters only ever increase.
struct TransmissionLog {
    /// One-way sends as counted by the channel's counting policy.
    std::uint64_t one_way_sends = 0;
    /// Transmissions that were lost (always counted).
    std::uint64_t lost = 0;
    /// Bounces attempted, successful or not.
    std::uint64_t attempted_bounces = 0;
    std::uint64_t completed_bounces = 0;
    /// Times coherent progress was destroyed and restarted from scratch.
    std::uint64_t restarts = 0;
};

/// One one-way transmission. True with probability eta. On a lossless
/// channel no randomness is consumed.
bool transmit(const LossyChannel &ch, RngStream &rng, TransmissionLog &log);

/// Sends an M-qubit bundle whose qubits are lost independently; any loss
/// voids the whole bundle. Counts M sends per attempt (zero for a voided
/// attempt when lost sends are not counted). Returns true if all survived.
bool transmit_bundle(std::uint64_t qubits, const LossyChannel &ch, RngStream &rng, TransmissionLog &log);

/// Closed form for the expected number of bounces needed to complete m
/// consecutive successful bounces when any loss restarts from zero:
/// (eta^{-2m} - 1)/(1 - eta^2), with the limit m at eta = 1.
/// Evaluated in a cancellation-free form; +inf once it exceeds double range.
double expected_bounces(std::uint64_t m, double eta);

/// Drives bounce attempts (two legs each, both must survive) until m
/// consecutive successes. Returns the number of bounces attempted by this
/// call. Progress is reset on every loss.
std::uint64_t run_coherent_bounces(std::uint64_t m, const LossyChannel &ch, RngStream &rng, TransmissionLog &log);

}  // namespace tqsync
