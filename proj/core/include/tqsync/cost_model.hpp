#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace tqsync::cost {

// Closed-form resource counts, in expected one-way qubit communications, and
// uncertainty formulas. Everything here is independent of the simulator so
// the two can be checked against each other.
//
// Costs that exceed the double range come back as +infinity; use
// `saturated()` to test for that.

inline bool saturated(double cost) { return cost == std::numeric_limits<double>::infinity(); }

/// Repetitions per bit for the bitwise protocols: ceil(32 ln(2k/eps)).
std::uint64_t repetitions_per_bit(int k, double eps);

/// (32/pi^2) ln(2/eps) 2^{2k}.
double sql_one_way_cost(int k, double eps);
/// (16/pi^2) ln(2/eps) 2^{2k}.
double sql_two_way_cost(int k, double eps);
/// 64 ln(2k/eps) (2^k - 1).
double improved_cost(int k, double eps);
/// sql_one_way_cost / eta.
double lossy_sql_cost(int k, double eps, double eta);
/// 64 ln(2k/eps) sum_{j<k} E_B(2^j, eta).
double lossy_improved_cost(int k, double eps, double eta);

/// Two-way shots needed at effective frequency 2^{k1} omega to pin down the
/// remaining k - k1 bits with failure budget eps/2:
/// ceil((8/pi^2) ln(4/eps) 2^{2(k-k1)}). Zero when k1 == k.
std::uint64_t hybrid_phase2_shots(int k1, int k, double eps);

/// lossy_improved_cost(k1, eps/2, eta) + phase-2 shots * 2 E_B(2^{k1}, eta).
double hybrid_cost(int k1, int k, double eps, double eta);

/// k1 in [1, k] minimising hybrid_cost; ties go to the larger k1.
int optimal_k1(int k, double eps, double eta);

/// sqrt((1-eps)^2 2^{-2k} pi^2/omega^2 + eps^2 pi^2/omega^2).
double uncertainty_mixture(int k, double eps, double omega);

enum class SqlVariant { OneWay, TwoWay };

/// 2/(omega sqrt(N_c)) one-way, sqrt2/(omega sqrt(N_c)) two-way.
double sql_uncertainty(double communications, double omega, SqlVariant variant);

/// quadratures * n * 2 sum_{j<k} E_B(2^j): the improved protocol's expected
/// sends when every bounce attempt is charged two legs, with n the integer
/// repetition count. Lossless this is exactly quadratures * 2n(2^k - 1).
double improved_expected_sends(int k, double eps, double eta, int quadratures);

enum class Protocol { SqlOneWay, SqlTwoWay, Improved, LossySql, LossyImproved, Hybrid };

std::string_view to_string(Protocol p);

struct CostQuery {
    int k = 1;
    double eps = 0.1;
    double eta = 1.0;
    Protocol protocol = Protocol::SqlOneWay;
    /// Used by Hybrid only; the optimum is taken when absent.
    std::optional<int> k1;
};

double evaluate(const CostQuery &q);

}  // namespace tqsync::cost
