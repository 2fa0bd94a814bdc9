#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "itw/errors.hpp"

namespace itw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Named numerical thresholds used across the toolkit.
///
/// rank_tol:     relative singular-value cutoff deciding numerical rank.
/// commute_tol:  relative commutator norm accepted for hypothesis checks.
/// residual_tol: relative residual accepted for derived identities.
/// guard:        number of top truncation levels excluded from ladder-model
///               identity checks.
struct Tolerances {
    double rank_tol = 1e-10;
    double commute_tol = 1e-9;
    double residual_tol = 1e-9;
    int guard = 2;

    void validate() const {
        if (!(rank_tol > 0.0) || !(commute_tol > 0.0) || !(residual_tol > 0.0))
            throw Error("Tolerances: thresholds must be strictly positive");
        if (guard < 0) throw Error("Tolerances: guard must be non-negative");
    }
};

namespace detail {

inline double safe_denom(double x) {
    return std::max(x, std::numeric_limits<double>::min());
}

}  // namespace detail

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows())
        throw DimensionMismatch(std::string(what) + ": dimension mismatch " +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
}

/// Spectral norm (largest singular value).
inline double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline Matrix adjoint(const Matrix& m) { return m.adjoint(); }

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "multiply");
    return a * b;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

/// ||[a,b]|| / (||a||·||b||); zero when either factor vanishes.
inline double commutation_defect(const Matrix& a, const Matrix& b) {
    const double na = op_norm(a);
    const double nb = op_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return op_norm(commutator(a, b)) / detail::safe_denom(na * nb);
}

/// ||a − b|| / max(||a||, ||b||); basis-independent operator distance.
inline double relative_distance(const Matrix& a, const Matrix& b) {
    const double scale = std::max(op_norm(a), op_norm(b));
    if (scale == 0.0) return 0.0;
    return op_norm(a - b) / scale;
}

/// ||m − m†|| / ||m||.
inline double hermiticity_defect(const Matrix& m) {
    const double n = op_norm(m);
    if (n == 0.0) return 0.0;
    return op_norm(m - m.adjoint()) / n;
}

/// Rotates the phase so the largest-modulus entry is real positive.
/// Makes eigenvector and kernel bases reproducible across runs.
inline Vector phase_fixed(Vector v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best > 0.0) v *= std::conj(v(imax)) / best;
    return v;
}

inline Matrix inverse(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "inverse");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smax == 0.0 || smin <= tol.rank_tol * smax)
        throw SingularMatrix("inverse: smallest singular value " + std::to_string(smin) +
                             " below relative cutoff");
    RealVector inv = sv.cwiseInverse();
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// Moore–Penrose pseudo-inverse; numerical rank decided by rank_tol.
inline Matrix pseudo_inverse(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "pseudo_inverse");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
    RealVector inv = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

inline int numerical_rank(const Matrix& m, const Tolerances& tol = {}) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = tol.rank_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

struct HermitianEigenSystem {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns, phase-fixed
};

inline HermitianEigenSystem eig_hermitian(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "eig_hermitian");
    if (hermiticity_defect(m) > tol.commute_tol)
        throw NotHermitian("eig_hermitian: hermiticity defect " +
                           std::to_string(hermiticity_defect(m)) + " above tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("eig_hermitian: solver did not converge");
    HermitianEigenSystem sys{es.eigenvalues(), es.eigenvectors()};
    for (Eigen::Index j = 0; j < sys.eigenvectors.cols(); ++j)
        sys.eigenvectors.col(j) = phase_fixed(sys.eigenvectors.col(j));
    return sys;
}

struct GeneralEigenSystem {
    Vector eigenvalues;        // sorted by (re, im)
    Matrix eigenvectors;       // unit-norm right eigenvectors, phase-fixed
    RealVector residuals;      // ||M v − λ v|| / ||M|| per pair
    std::vector<int> cluster;  // cluster id per eigenvalue under the rank_tol·ρ rule
    bool degenerate = false;   // true if any cluster holds more than one eigenvalue

    double spectral_radius() const {
        double r = 0.0;
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
            r = std::max(r, std::abs(eigenvalues(i)));
        return r;
    }
};

inline GeneralEigenSystem eig_general(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "eig_general");
    Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("eig_general: solver did not converge");

    const Eigen::Index d = m.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) order[static_cast<size_t>(i)] = i;
    const Vector& raw = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&raw](Eigen::Index a, Eigen::Index b) {
        if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
        return raw(a).imag() < raw(b).imag();
    });

    GeneralEigenSystem sys;
    sys.eigenvalues.resize(d);
    sys.eigenvectors.resize(d, d);
    sys.residuals.resize(d);
    const double mnorm = detail::safe_denom(op_norm(m));
    for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index i = order[static_cast<size_t>(k)];
        sys.eigenvalues(k) = raw(i);
        Vector v = es.eigenvectors().col(i);
        v.normalize();
        sys.eigenvectors.col(k) = phase_fixed(v);
        sys.residuals(k) = (m * sys.eigenvectors.col(k) -
                            sys.eigenvalues(k) * sys.eigenvectors.col(k))
                               .norm() /
                           mnorm;
    }

    // Degenerate eigenvalues are grouped, never silently merged.
    const double ctol = tol.rank_tol * std::max(sys.spectral_radius(), op_norm(m));
    sys.cluster.assign(static_cast<size_t>(d), 0);
    int cid = 0;
    for (Eigen::Index k = 1; k < d; ++k) {
        if (std::abs(sys.eigenvalues(k) - sys.eigenvalues(k - 1)) > ctol) ++cid;
        sys.cluster[static_cast<size_t>(k)] = cid;
    }
    for (Eigen::Index k = 1; k < d; ++k)
        if (sys.cluster[static_cast<size_t>(k)] == sys.cluster[static_cast<size_t>(k - 1)])
            sys.degenerate = true;
    return sys;
}

/// Unique positive square root of a Hermitian positive-semidefinite matrix.
/// Eigenvalues inside the round-off window [−rank_tol·||m||, 0) are clamped to 0.
inline Matrix sqrt_positive(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "sqrt_positive");
    if (hermiticity_defect(m) > tol.commute_tol)
        throw NotHermitian("sqrt_positive: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("sqrt_positive: solver did not converge");
    const RealVector& lam = es.eigenvalues();
    const double scale = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
    const double window = tol.rank_tol * scale;
    RealVector root(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -window)
            throw NegativeEigenvalue("sqrt_positive: eigenvalue " + std::to_string(lam(i)) +
                                     " below clamping window");
        root(i) = std::sqrt(std::max(lam(i), 0.0));
    }
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

/// Orthonormal basis of the numerical nullspace; empty when the kernel is trivial.
inline std::vector<Vector> kernel_basis(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "kernel_basis");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<Vector> basis;
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol.rank_tol * smax)
            basis.push_back(phase_fixed(svd.matrixV().col(i)));
    return basis;
}

/// Orthogonal projector onto the numerical range of m.
inline Matrix range_projector(const Matrix& m, const Tolerances& tol = {}) {
    require_square(m, "range_projector");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Matrix p = Matrix::Zero(m.rows(), m.rows());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_tol * smax && sv(i) > 0.0)
            p += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
    return p;
}

/// Projector onto the first (d − guard) canonical coordinates.
inline Matrix guard_projector(int dim, int guard) {
    if (guard < 0 || guard >= dim)
        throw Error("guard_projector: need 0 <= guard < dim");
    Matrix p = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim - guard; ++i) p(i, i) = 1.0;
    return p;
}

/// Spectral norm of the leading k×k block.
inline double block_norm(const Matrix& m, int k) {
    if (k <= 0 || k > m.rows()) throw Error("block_norm: bad block size");
    return op_norm(m.topLeftCorner(k, k));
}

/// Pairwise degeneracy flags for a list of real values under an absolute threshold.
inline std::vector<bool> degenerate_flags(const std::vector<double>& values, double threshold) {
    std::vector<bool> flags(values.size(), false);
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = i + 1; j < values.size(); ++j)
            if (std::abs(values[i] - values[j]) <= threshold) {
                flags[i] = true;
                flags[j] = true;
            }
    return flags;
}

}  // namespace itw
