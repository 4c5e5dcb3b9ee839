#include "tqsync/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqsync {

namespace {

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("channel survival probability eta=" + std::to_string(eta) +
                                    " outside (0, 1]");
    }
}

}  // namespace

LossyChannel::LossyChannel(double eta, bool count_lost_sends) : eta_(eta), count_lost_sends_(count_lost_sends) {
    check_eta(eta);
}

bool transmit(const LossyChannel &ch, RngStream &rng, TransmissionLog &log) {
    if (ch.lossless_channel()) {
        ++log.one_way_sends;
        return true;
    }
    bool survived = rng.uniform() < ch.eta();
    if (survived || ch.count_lost_sends()) {
        ++log.one_way_sends;
    }
    if (!survived) {
        ++log.lost;
    }
    return survived;
}

bool transmit_bundle(std::uint64_t qubits, const LossyChannel &ch, RngStream &rng, TransmissionLog &log) {
    if (qubits == 0) {
        throw std::invalid_argument("transmit_bundle: empty bundle");
    }
    if (ch.lossless_channel()) {
        log.one_way_sends += qubits;
        return true;
    }
    // Independent per-qubit losses: the bundle survives with eta^M.
    double survive = std::pow(ch.eta(), static_cast<double>(qubits));
    bool survived = rng.uniform() < survive;
    if (survived || ch.count_lost_sends()) {
        log.one_way_sends += qubits;
    }
    if (!survived) {
        ++log.lost;
        ++log.restarts;
    }
    return survived;
}

double expected_bounces(std::uint64_t m, double eta) {
    check_eta(eta);
    if (m == 0) {
        throw std::invalid_argument("expected_bounces: m must be >= 1");
    }
    if (eta == 1.0) {
        return static_cast<double>(m);
    }
    double log_eta = std::log(eta);
    double num = std::expm1(-2.0 * static_cast<double>(m) * log_eta);  // eta^{-2m} - 1
    double den = -std::expm1(2.0 * log_eta);                           // 1 - eta^2
    return num / den;
}

std::uint64_t run_coherent_bounces(std::uint64_t m, const LossyChannel &ch, RngStream &rng, TransmissionLog &log) {
    if (m == 0) {
        throw std::invalid_argument("run_coherent_bounces: m must be >= 1");
    }
    if (ch.lossless_channel()) {
        log.one_way_sends += 2 * m;
        log.attempted_bounces += m;
        log.completed_bounces += m;
        return m;
    }
    std::uint64_t attempts = 0;
    std::uint64_t progress = 0;
    while (progress < m) {
        ++attempts;
        ++log.attempted_bounces;
        if (transmit(ch, rng, log) && transmit(ch, rng, log)) {
            ++progress;
            ++log.completed_bounces;
        } else {
            progress = 0;
            ++log.restarts;
        }
    }
    return attempts;
}

}  // namespace tqsync
