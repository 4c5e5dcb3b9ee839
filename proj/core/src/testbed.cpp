#include "tqsync/testbed.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tqsync {

namespace {

PureQubit prepared_plus() { return apply(hadamard_op(Party::Alice), PureQubit::excited(Party::Alice)); }

// cos(M phi - shift) with M phi reduced in extended precision.
double ghz_mean(std::uint64_t qubits, double phi, double shift) {
    long double a = std::fmod(static_cast<long double>(qubits) * static_cast<long double>(phi),
                              2.0L * std::numbers::pi_v<long double>);
    return std::cos(static_cast<double>(a) - shift);
}

}  // namespace

Testbed::Testbed(const TruthModel &truth, const LossyChannel &channel, const RngStream &rng)
    : truth_(truth),
      phi_ba_(truth.phase()),
      channel_(channel),
      channel_rng_(rng.child("channel")),
      measure_rng_(rng.child("measure")),
      one_way_final_(one_way_state()) {}

PureQubit Testbed::one_way_state() const {
    // Bob's H_B written in Alice's frame.
    Unitary2 bob_h = frame_conjugate(hadamard_op(Party::Bob), phi_ba_);
    return apply(bob_h, prepared_plus());
}

PureQubit Testbed::bounce_state(std::uint64_t bounces, double quadrature_shift) const {
    PureQubit psi = prepared_plus();
    psi = apply(bounce_unitary(bounces, phi_ba_), psi);
    if (quadrature_shift != 0.0) {
        psi = apply(z_rotation(PhaseAngle(quadrature_shift)), psi);
    }
    return apply(hadamard_op(Party::Alice), psi);
}

int Testbed::one_way_shot() {
    while (!transmit(channel_, channel_rng_, log_)) {
        ++log_.restarts;
    }
    return measure_minus_z(one_way_final_, measure_rng_);
}

int Testbed::bounce_shot(std::uint64_t bounces, double quadrature_shift) {
    if (bounces == 0) {
        throw std::invalid_argument("bounce_shot: need at least one bounce");
    }
    run_coherent_bounces(bounces, channel_, channel_rng_, log_);
    auto key = std::make_pair(bounces, quadrature_shift);
    auto it = bounce_cache_.find(key);
    if (it == bounce_cache_.end()) {
        it = bounce_cache_.emplace(key, bounce_state(bounces, quadrature_shift)).first;
    }
    return measure_minus_z(it->second, measure_rng_);
}

int Testbed::ghz_shot(std::uint64_t qubits, double quadrature_shift) {
    if (qubits == 0) {
        throw std::invalid_argument("ghz_shot: need at least one qubit");
    }
    while (!transmit_bundle(qubits, channel_, channel_rng_, log_)) {
    }
    auto key = std::make_pair(qubits, quadrature_shift);
    auto it = ghz_cache_.find(key);
    if (it == ghz_cache_.end()) {
        it = ghz_cache_.emplace(key, ghz_mean(qubits, phi_ba_.radians(), quadrature_shift)).first;
    }
    return sample_pm1(it->second, measure_rng_);
}

}  // namespace tqsync
