#pragma once

#include <cmath>
#include <cstdint>

#include "itw/linalg.hpp"

namespace itw {

/// Counter-based deterministic generator: draw n is a pure function of
/// (seed, n), so a given seed reproduces the same stream on every run.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

    static constexpr const char* name() { return "splitmix64"; }

    std::uint64_t at(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return at(counter_++); }

    /// Uniform in [0, 1) with 53 significant bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box–Muller.
    double normal() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Standard complex normal (unit variance overall).
    Complex cnormal() {
        const double s = 0.7071067811865475244008443621048;
        return Complex(s * normal(), s * normal());
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

inline Matrix random_complex_matrix(SplitMix64& g, int d) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = g.cnormal();
    return m;
}

inline Vector random_unit_vector(SplitMix64& g, int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = g.cnormal();
    const double n = v.norm();
    if (n == 0.0) return Vector::Unit(d, 0);
    return v / n;
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
inline Matrix random_unitary(SplitMix64& g, int d) {
    Matrix z = random_complex_matrix(g, d);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rj = r(j, j);
        const double a = std::abs(rj);
        if (a > 0.0) q.col(j) *= rj / a;
    }
    return q;
}

inline Matrix random_hermitian(SplitMix64& g, int d) {
    Matrix z = random_complex_matrix(g, d);
    return 0.5 * (z + z.adjoint());
}

/// Random invertible matrix with condition number at most kappa_max.
/// Singular values are drawn log-uniformly in [1/sqrt(k), sqrt(k)].
inline Matrix random_matrix_with_condition(SplitMix64& g, int d, double kappa_max) {
    Matrix u = random_unitary(g, d);
    Matrix v = random_unitary(g, d);
    const double half_log = 0.5 * std::log(kappa_max);
    RealVector sigma(d);
    for (int i = 0; i < d; ++i) sigma(i) = std::exp(g.uniform(-half_log, half_log));
    return u * sigma.asDiagonal() * v.adjoint();
}

/// Random Hermitian positive-definite matrix with eigenvalue spread kappa_max.
inline Matrix random_hpd(SplitMix64& g, int d, double kappa_max) {
    Matrix u = random_unitary(g, d);
    const double half_log = 0.5 * std::log(kappa_max);
    RealVector lam(d);
    for (int i = 0; i < d; ++i) lam(i) = std::exp(g.uniform(-half_log, half_log));
    return u * lam.asDiagonal() * u.adjoint();
}

/// Random diagonal matrix with positive entries and bounded spread.
inline Matrix random_positive_diagonal(SplitMix64& g, int d, double kappa_max) {
    Matrix m = Matrix::Zero(d, d);
    const double half_log = 0.5 * std::log(kappa_max);
    for (int i = 0; i < d; ++i) m(i, i) = std::exp(g.uniform(-half_log, half_log));
    return m;
}

}  // namespace itw
