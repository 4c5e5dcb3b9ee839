#include "tqsync/cost_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tqsync/channel.hpp"
#include "tqsync/phase.hpp"

namespace tqsync::cost {

namespace {

// 2^j bounce counts must fit a 64-bit counter.
constexpr int kMaxBounceBits = 62;

void check_k(int k) {
    if (k < 1) {
        throw std::invalid_argument("bits of precision k=" + std::to_string(k) + " must be >= 1");
    }
}

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("error budget eps=" + std::to_string(eps) + " outside (0, 1)");
    }
}

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("survival probability eta=" + std::to_string(eta) + " outside (0, 1]");
    }
}

void check_bounce_bits(int k) {
    if (k > kMaxBounceBits) {
        throw std::invalid_argument("k=" + std::to_string(k) + " needs more than 2^62 coherent bounces per round");
    }
}

double sum_expected_bounces(int k, double eta) {
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
        total += expected_bounces(std::uint64_t{1} << j, eta);
    }
    return total;
}

}  // namespace

std::uint64_t repetitions_per_bit(int k, double eps) {
    check_k(k);
    check_eps(eps);
    return static_cast<std::uint64_t>(std::ceil(32.0 * std::log(2.0 * k / eps)));
}

double sql_one_way_cost(int k, double eps) {
    check_k(k);
    check_eps(eps);
    return 32.0 / (kPi * kPi) * std::log(2.0 / eps) * std::ldexp(1.0, 2 * k);
}

double sql_two_way_cost(int k, double eps) {
    check_k(k);
    check_eps(eps);
    return 16.0 / (kPi * kPi) * std::log(2.0 / eps) * std::ldexp(1.0, 2 * k);
}

double improved_cost(int k, double eps) {
    check_k(k);
    check_eps(eps);
    return 64.0 * std::log(2.0 * k / eps) * (std::ldexp(1.0, k) - 1.0);
}

double lossy_sql_cost(int k, double eps, double eta) {
    check_eta(eta);
    return sql_one_way_cost(k, eps) / eta;
}

double lossy_improved_cost(int k, double eps, double eta) {
    check_k(k);
    check_eps(eps);
    check_eta(eta);
    check_bounce_bits(k);
    return 64.0 * std::log(2.0 * k / eps) * sum_expected_bounces(k, eta);
}

std::uint64_t hybrid_phase2_shots(int k1, int k, double eps) {
    check_k(k1);
    check_eps(eps);
    if (k1 > k) {
        throw std::invalid_argument("hybrid: k1=" + std::to_string(k1) + " exceeds k=" + std::to_string(k));
    }
    if (k1 == k) {
        return 0;
    }
    double shots = 8.0 / (kPi * kPi) * std::log(4.0 / eps) * std::ldexp(1.0, 2 * (k - k1));
    return static_cast<std::uint64_t>(std::ceil(shots));
}

double hybrid_cost(int k1, int k, double eps, double eta) {
    check_eta(eta);
    check_bounce_bits(k1);
    double phase1 = lossy_improved_cost(k1, eps / 2.0, eta);
    std::uint64_t shots = hybrid_phase2_shots(k1, k, eps);
    if (shots == 0) {
        return phase1;
    }
    return phase1 + static_cast<double>(shots) * 2.0 * expected_bounces(std::uint64_t{1} << k1, eta);
}

int optimal_k1(int k, double eps, double eta) {
    check_k(k);
    int best = k;
    double best_cost = hybrid_cost(k, k, eps, eta);
    for (int k1 = k - 1; k1 >= 1; --k1) {
        double c = hybrid_cost(k1, k, eps, eta);
        if (c < best_cost) {
            best_cost = c;
            best = k1;
        }
    }
    return best;
}

double uncertainty_mixture(int k, double eps, double omega) {
    check_k(k);
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("uncertainty_mixture: eps outside [0, 1]");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("uncertainty_mixture: omega must be positive");
    }
    double cell = std::ldexp(1.0, -k);
    double success = (1.0 - eps) * cell;
    return kPi / omega * std::sqrt(success * success + eps * eps);
}

double sql_uncertainty(double communications, double omega, SqlVariant variant) {
    if (!(communications >= 1.0)) {
        throw std::invalid_argument("sql_uncertainty: need at least one communication");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("sql_uncertainty: omega must be positive");
    }
    double c = variant == SqlVariant::OneWay ? 2.0 : std::sqrt(2.0);
    return c / (omega * std::sqrt(communications));
}

double improved_expected_sends(int k, double eps, double eta, int quadratures) {
    check_eta(eta);
    check_bounce_bits(k);
    if (quadratures != 1 && quadratures != 2) {
        throw std::invalid_argument("improved_expected_sends: quadratures must be 1 or 2");
    }
    double n = static_cast<double>(repetitions_per_bit(k, eps));
    return quadratures * n * 2.0 * sum_expected_bounces(k, eta);
}

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::SqlOneWay: return "sql_one_way";
        case Protocol::SqlTwoWay: return "sql_two_way";
        case Protocol::Improved: return "improved";
        case Protocol::LossySql: return "lossy_sql";
        case Protocol::LossyImproved: return "lossy_improved";
        case Protocol::Hybrid: return "hybrid";
    }
    return "?";
}

double evaluate(const CostQuery &q) {
    switch (q.protocol) {
        case Protocol::SqlOneWay: return sql_one_way_cost(q.k, q.eps);
        case Protocol::SqlTwoWay: return sql_two_way_cost(q.k, q.eps);
        case Protocol::Improved: return improved_cost(q.k, q.eps);
        case Protocol::LossySql: return lossy_sql_cost(q.k, q.eps, q.eta);
        case Protocol::LossyImproved: return lossy_improved_cost(q.k, q.eps, q.eta);
        case Protocol::Hybrid: return hybrid_cost(q.k1.value_or(optimal_k1(q.k, q.eps, q.eta)), q.k, q.eps, q.eta);
    }
    throw std::invalid_argument("unknown protocol");
}

}  // namespace tqsync::cost
