#pragma once

#include <optional>
#include <vector>

#include "itw/linalg.hpp"

namespace itw {

/// Indexed family of eigenvectors with eigenvalues. Houses both the source
/// family F1 and transported families F2; `nu` and `multiplicity_flags` are
/// filled on demand.
struct EigenFamily {
    std::vector<int> indices;           // strictly increasing
    std::vector<Vector> vectors;        // one per index, nonzero
    std::vector<Complex> eigenvalues;   // one per index
    std::vector<double> nu;             // optional; empty when absent
    std::vector<bool> multiplicity_flags;  // optional; true = degenerate nu

    int size() const { return static_cast<int>(indices.size()); }
    bool has_nu() const { return !nu.empty(); }

    /// Matrix whose columns are the family vectors, in index order.
    Matrix column_matrix() const {
        if (vectors.empty()) return Matrix(0, 0);
        Matrix m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
        for (size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
        return m;
    }

    std::optional<int> position_of(int index) const {
        for (size_t k = 0; k < indices.size(); ++k)
            if (indices[k] == index) return static_cast<int>(k);
        return std::nullopt;
    }

    void validate() const {
        if (indices.size() != vectors.size() || indices.size() != eigenvalues.size())
            throw Error("EigenFamily: field lengths disagree");
        for (size_t k = 1; k < indices.size(); ++k)
            if (indices[k] <= indices[k - 1])
                throw Error("EigenFamily: indices must be strictly increasing");
        for (const auto& v : vectors)
            if (v.norm() == 0.0) throw Error("EigenFamily: zero vector");
        if (!nu.empty()) {
            if (nu.size() != indices.size()) throw Error("EigenFamily: nu length mismatch");
            for (double x : nu)
                if (x < 0.0) throw Error("EigenFamily: nu must be non-negative");
        }
    }
};

/// Family made of the canonical basis vectors e_0..e_{d-1} with given eigenvalues.
inline EigenFamily canonical_family(const std::vector<double>& eps) {
    EigenFamily fam;
    const int d = static_cast<int>(eps.size());
    for (int n = 0; n < d; ++n) {
        fam.indices.push_back(n);
        fam.vectors.push_back(Vector::Unit(d, n));
        fam.eigenvalues.push_back(Complex(eps[static_cast<size_t>(n)], 0.0));
    }
    return fam;
}

/// Family built from the columns of a Hermitian eigendecomposition.
inline EigenFamily family_from_hermitian(const HermitianEigenSystem& sys) {
    EigenFamily fam;
    for (Eigen::Index n = 0; n < sys.eigenvalues.size(); ++n) {
        fam.indices.push_back(static_cast<int>(n));
        fam.vectors.push_back(sys.eigenvectors.col(n));
        fam.eigenvalues.push_back(Complex(sys.eigenvalues(n), 0.0));
    }
    return fam;
}

inline EigenFamily family_from_general(const GeneralEigenSystem& sys) {
    EigenFamily fam;
    for (Eigen::Index n = 0; n < sys.eigenvalues.size(); ++n) {
        fam.indices.push_back(static_cast<int>(n));
        fam.vectors.push_back(sys.eigenvectors.col(n));
        fam.eigenvalues.push_back(sys.eigenvalues(n));
    }
    return fam;
}

/// Rank-one map f ↦ ⟨phi_n, f⟩ phi_m, i.e. |phi_m⟩⟨phi_n|.
inline Matrix rank_one_map(const Vector& phi_n, const Vector& phi_m) {
    return phi_m * phi_n.adjoint();
}

/// P_n = |phi⟩⟨phi| (idempotent only for unit phi).
inline Matrix projector(const Vector& phi) { return phi * phi.adjoint(); }

/// Orthogonal projector onto the line through phi.
inline Matrix normalized_projector(const Vector& phi) {
    const double n2 = phi.squaredNorm();
    if (n2 == 0.0) throw ZeroVector("normalized_projector: zero vector");
    return (phi * phi.adjoint()) / n2;
}

}  // namespace itw
