#pragma once

// Independent reference computations. Nothing here calls into tqsync beyond
// plain types, so a bug in the library cannot cancel out in a comparison.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row major

constexpr double kPi = 3.14159265358979323846;

inline Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 rz(double phi) {
    // exp(-i phi Z / 2)
    return {std::polar(1.0, -phi / 2), 0.0, 0.0, std::polar(1.0, phi / 2)};
}

inline Mat2 adjoint(const Mat2 &a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

/// E_B by the restart recurrence E(m) = (E(m-1) + 1) / eta^2, E(0) = 0.
inline double expected_bounces(std::uint64_t m, double eta) {
    double e = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        e = (e + 1.0) / (eta * eta);
    }
    return e;
}

/// First k binary digits of T in [0, 1) via integer truncation.
inline std::vector<int> binary_digits(double T, int k) {
    auto cell = static_cast<std::uint64_t>(std::floor(std::ldexp(T - std::floor(T), k)));
    std::vector<int> out(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        out[static_cast<size_t>(i)] = static_cast<int>((cell >> (k - 1 - i)) & 1u);
    }
    return out;
}

inline std::uint64_t repetitions(int k, double eps) {
    return static_cast<std::uint64_t>(std::ceil(32.0 * std::log(2.0 * k / eps)));
}

inline double lossy_improved(int k, double eps, double eta) {
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
        sum += expected_bounces(std::uint64_t{1} << j, eta);
    }
    return 64.0 * std::log(2.0 * k / eps) * sum;
}

inline double lossy_sql(int k, double eps, double eta) {
    return 32.0 / (kPi * kPi) * std::log(2.0 / eps) * std::pow(4.0, k) / eta;
}

inline double hybrid(int k1, int k, double eps, double eta) {
    double phase1 = lossy_improved(k1, eps / 2, eta);
    if (k1 == k) {
        return phase1;
    }
    double shots = std::ceil(8.0 / (kPi * kPi) * std::log(4.0 / eps) * std::pow(4.0, k - k1));
    return phase1 + shots * 2.0 * expected_bounces(std::uint64_t{1} << k1, eta);
}

/// argmin over k1 in [1, k]; ties to the larger k1.
inline int best_k1(int k, double eps, double eta) {
    int best = k;
    double best_cost = hybrid(k, k, eps, eta);
    for (int k1 = k - 1; k1 >= 1; --k1) {
        double c = hybrid(k1, k, eps, eta);
        if (c < best_cost) {
            best = k1;
            best_cost = c;
        }
    }
    return best;
}

/// Explicit 2^M statevector: GHZ in Alice's frame, each qubit's amplitudes
/// multiplied by (e^{-i phi/2}, e^{+i phi/2}) for the frame change, Hadamard
/// (1/sqrt2)[[1,-1],[1,1]] on every qubit, then <(-1)^M Z^{(x)M}> where
/// Z|0> = |0> and |0> is bit value 0.
inline double ghz_parity(int M, double phi) {
    const size_t dim = size_t{1} << M;
    std::vector<cplx> psi(dim, 0.0);
    psi[0] = 1.0 / std::sqrt(2.0);
    psi[dim - 1] = 1.0 / std::sqrt(2.0);
    for (size_t idx = 0; idx < dim; ++idx) {
        for (int q = 0; q < M; ++q) {
            bool one = (idx >> q) & 1u;
            psi[idx] *= std::polar(1.0, one ? phi / 2 : -phi / 2);
        }
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (int q = 0; q < M; ++q) {
        size_t bit = size_t{1} << q;
        for (size_t idx = 0; idx < dim; ++idx) {
            if (idx & bit) {
                continue;
            }
            cplx a0 = psi[idx];
            cplx a1 = psi[idx | bit];
            psi[idx] = s * (a0 - a1);
            psi[idx | bit] = s * (a0 + a1);
        }
    }
    double parity = 0.0;
    for (size_t idx = 0; idx < dim; ++idx) {
        int ones = 0;
        for (int q = 0; q < M; ++q) {
            ones += (idx >> q) & 1u;
        }
        double z = (ones % 2 == 0) ? 1.0 : -1.0;
        parity += z * std::norm(psi[idx]);
    }
    return (M % 2 == 0 ? 1.0 : -1.0) * parity;
}

}  // namespace oracle
