#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itw/family.hpp"
#include "itw/linalg.hpp"

namespace itw {

enum class PartnerMode { alpha, beta, beta_pseudoinverse };

inline const char* to_string(PartnerMode m) {
    switch (m) {
        case PartnerMode::alpha: return "alpha";
        case PartnerMode::beta: return "beta";
        case PartnerMode::beta_pseudoinverse: return "beta_pseudoinverse";
    }
    return "?";
}

/// A constructed (Theta1, x, N1, N2, Theta2) bundle.
///
/// n1 = x·x† and n2 = x†·x exactly by construction. `mode` records which
/// formula produced theta2:
///   alpha               x⁻¹ Theta1 x            (x invertible)
///   beta                N2⁻¹ (x† Theta1 x)      (N2 invertible)
///   beta_pseudoinverse  N2⁺ (x† Theta1 x)       (N2 singular, flagged)
struct IntertwinePair {
    Matrix theta1;
    Matrix x;
    Matrix n1;
    Matrix n2;
    Matrix theta2;
    PartnerMode mode = PartnerMode::alpha;
    std::map<std::string, double> diagnostics;

    int dim() const { return static_cast<int>(theta1.rows()); }
};

/// Builds the partner operator of theta1 under the intertwiner x.
///
/// The standing hypothesis [x x†, theta1] = 0 is enforced up to commute_tol;
/// pass allow_commutator_defect to proceed anyway (the defect is always
/// recorded in the diagnostics).
inline IntertwinePair build_partners(const Matrix& theta1, const Matrix& x,
                                     const Tolerances& tol = {},
                                     bool allow_commutator_defect = false) {
    require_same_dim(theta1, x, "build_partners");
    IntertwinePair pair;
    pair.theta1 = theta1;
    pair.x = x;
    pair.n1 = x * x.adjoint();
    pair.n2 = x.adjoint() * x;

    const double defect = commutation_defect(pair.n1, theta1);
    pair.diagnostics["commutator_defect_n1_theta1"] = defect;
    if (defect > tol.commute_tol && !allow_commutator_defect)
        throw CommutatorTooLarge("build_partners: [N1, Theta1] defect " +
                                     std::to_string(defect) + " above tolerance",
                                 defect);

    try {
        const Matrix xinv = inverse(x, tol);
        pair.mode = PartnerMode::alpha;
        pair.theta2 = xinv * theta1 * x;
    } catch (const SingularMatrix&) {
        const Matrix sandwich = x.adjoint() * theta1 * x;
        try {
            pair.mode = PartnerMode::beta;
            pair.theta2 = inverse(pair.n2, tol) * sandwich;
        } catch (const SingularMatrix&) {
            pair.mode = PartnerMode::beta_pseudoinverse;
            pair.theta2 = pseudo_inverse(pair.n2, tol) * sandwich;
        }
    }

    pair.diagnostics["n2_pseudo_inverse"] =
        pair.mode == PartnerMode::beta_pseudoinverse ? 1.0 : 0.0;
    pair.diagnostics["hermiticity_defect_theta1"] = hermiticity_defect(theta1);
    pair.diagnostics["hermiticity_defect_theta2"] = hermiticity_defect(pair.theta2);

    const double nx = op_norm(x);
    const double nth = std::max(op_norm(theta1), op_norm(pair.theta2));
    const double den = detail::safe_denom(nx * nth);
    pair.diagnostics["intertwining_defect_x_theta2"] =
        op_norm(x * pair.theta2 - theta1 * x) / den;
    pair.diagnostics["intertwining_defect_theta2_xdag"] =
        op_norm(pair.theta2 * x.adjoint() - x.adjoint() * theta1) / den;
    return pair;
}

/// Result of transporting an eigenfamily through x†.
struct TransportResult {
    EigenFamily family;      // F2: indices kept, vectors x†·phi_n, eigenvalues inherited
    std::vector<int> gamma;  // dropped indices I1 \ I2
};

/// F2 = { x† phi_n : the image is numerically nonzero }, eigenvalues inherited.
inline TransportResult map_eigenfamily(const Matrix& x, const EigenFamily& fam1,
                                       const Tolerances& tol = {}) {
    fam1.validate();
    TransportResult out;
    const Matrix xd = x.adjoint();
    const double nx = op_norm(x);
    std::vector<double> kept_nu;
    for (int k = 0; k < fam1.size(); ++k) {
        const Vector& phi = fam1.vectors[static_cast<size_t>(k)];
        Vector w = xd * phi;
        if (w.norm() > tol.rank_tol * nx * phi.norm()) {
            out.family.indices.push_back(fam1.indices[static_cast<size_t>(k)]);
            out.family.vectors.push_back(w);
            out.family.eigenvalues.push_back(fam1.eigenvalues[static_cast<size_t>(k)]);
            kept_nu.push_back(w.squaredNorm() / detail::safe_denom(phi.squaredNorm()));
        } else {
            out.gamma.push_back(fam1.indices[static_cast<size_t>(k)]);
        }
    }
    out.family.nu = kept_nu;
    double numax = 0.0;
    for (double v : kept_nu) numax = std::max(numax, v);
    out.family.multiplicity_flags = degenerate_flags(kept_nu, tol.rank_tol * numax);
    return out;
}

/// nu_n = ||x† phi_n||² / ||phi_n||², one value per index of fam1.
/// Strictly positive exactly on the surviving index set I2.
inline std::vector<double> nu_values(const Matrix& x, const EigenFamily& fam1) {
    std::vector<double> nu;
    const Matrix xd = x.adjoint();
    for (const auto& phi : fam1.vectors)
        nu.push_back((xd * phi).squaredNorm() / detail::safe_denom(phi.squaredNorm()));
    return nu;
}

/// Reconstructs phi_n^(1) = x phi_n^(2) / ||phi_n^(2)||² for every n in I2.
/// Throws ZeroVector if some transported vector is annihilated by x, which
/// would contradict the construction.
inline EigenFamily recover_family1(const Matrix& x, const EigenFamily& fam2,
                                   const Tolerances& tol = {}) {
    fam2.validate();
    if (fam2.size() == 0) throw Error("recover_family1: empty family");
    EigenFamily out;
    const double nx = op_norm(x);
    for (int k = 0; k < fam2.size(); ++k) {
        const Vector& phi2 = fam2.vectors[static_cast<size_t>(k)];
        Vector w = x * phi2;
        if (w.norm() <= tol.rank_tol * nx * phi2.norm())
            throw ZeroVector("recover_family1: x annihilates transported vector at index " +
                             std::to_string(fam2.indices[static_cast<size_t>(k)]));
        out.indices.push_back(fam2.indices[static_cast<size_t>(k)]);
        out.vectors.push_back(w / phi2.squaredNorm());
        out.eigenvalues.push_back(fam2.eigenvalues[static_cast<size_t>(k)]);
    }
    return out;
}

/// The three numerically-equal kernel index sets of the lemma:
/// {n : x† phi_n ≈ 0}, {n : N1 phi_n ≈ 0} and {n : x (x† phi_n) ≈ 0}.
struct KernelEquivalenceReport {
    std::vector<int> kernel_xdag;
    std::vector<int> kernel_n1;
    std::vector<int> kernel_x_of_image;
    bool equal = false;
};

inline KernelEquivalenceReport kernel_equivalence_check(const Matrix& x,
                                                        const EigenFamily& fam1,
                                                        const Tolerances& tol = {}) {
    fam1.validate();
    KernelEquivalenceReport rep;
    const Matrix xd = x.adjoint();
    const Matrix n1 = x * xd;
    const double nx = op_norm(x);
    const double nn1 = op_norm(n1);
    for (int k = 0; k < fam1.size(); ++k) {
        const int n = fam1.indices[static_cast<size_t>(k)];
        const Vector& phi = fam1.vectors[static_cast<size_t>(k)];
        const Vector w = xd * phi;
        const bool in1 = w.norm() <= tol.rank_tol * nx * phi.norm();
        if (in1) rep.kernel_xdag.push_back(n);
        if ((n1 * phi).norm() <= tol.rank_tol * nn1 * phi.norm()) rep.kernel_n1.push_back(n);
        // A numerically-zero image counts as lying in ker(x).
        if (in1 || (x * w).norm() <= tol.rank_tol * nx * w.norm())
            rep.kernel_x_of_image.push_back(n);
    }
    rep.equal = rep.kernel_xdag == rep.kernel_n1 && rep.kernel_n1 == rep.kernel_x_of_image;
    return rep;
}

/// Orthonormal basis of the column span, as matrix columns.
inline Matrix orthonormal_span(const Matrix& columns, const Tolerances& tol = {}) {
    if (columns.size() == 0) return Matrix(0, 0);
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_tol * smax && sv(i) > 0.0) ++r;
    return svd.matrixU().leftCols(r);
}

struct IntertwiningReport {
    double defect_x_theta2 = 0.0;     // ||x Theta2 − Theta1 x|| (relative)
    double defect_theta2_xdag = 0.0;  // ||Theta2 x† − x† Theta1|| (relative)
    bool projected = false;           // residuals restricted to range(x†)
    bool pass = false;
};

/// Residuals of the two intertwining relations. In beta_pseudoinverse mode
/// the defects are evaluated on the closure of range(x†), where the partner
/// construction is meaningful.
inline IntertwiningReport verify_intertwining(const IntertwinePair& pair,
                                              const Tolerances& tol = {}) {
    IntertwiningReport rep;
    Matrix r1 = pair.x * pair.theta2 - pair.theta1 * pair.x;
    Matrix r2 = pair.theta2 * pair.x.adjoint() - pair.x.adjoint() * pair.theta1;
    if (pair.mode == PartnerMode::beta_pseudoinverse) {
        const Matrix p = range_projector(pair.x.adjoint(), tol);
        r1 = r1 * p;
        r2 = r2 * p;
        rep.projected = true;
    }
    const double den = detail::safe_denom(
        op_norm(pair.x) * std::max(op_norm(pair.theta1), op_norm(pair.theta2)));
    rep.defect_x_theta2 = op_norm(r1) / den;
    rep.defect_theta2_xdag = op_norm(r2) / den;
    rep.pass = rep.defect_x_theta2 <= tol.residual_tol && rep.defect_theta2_xdag <= tol.residual_tol;
    return rep;
}

struct CommutationSuiteReport {
    std::map<std::string, double> residuals;
    bool used_pseudo_inverse = false;
    bool pass = false;

    double max_residual() const {
        double m = 0.0;
        for (const auto& [k, v] : residuals) m = std::max(m, v);
        return m;
    }
};

/// Relative norms of the nine commutators that vanish under the standing
/// hypotheses. For a pair in beta_pseudoinverse mode N2⁻¹ is replaced by N2⁺
/// and the substitution is flagged; SingularN2 is raised only when an
/// allegedly invertible N2 fails to invert.
inline CommutationSuiteReport verify_commutation_suite(const IntertwinePair& pair,
                                                       const Tolerances& tol = {}) {
    CommutationSuiteReport rep;
    Matrix n2inv;
    if (pair.mode == PartnerMode::beta_pseudoinverse) {
        n2inv = pseudo_inverse(pair.n2, tol);
        rep.used_pseudo_inverse = true;
    } else {
        try {
            n2inv = inverse(pair.n2, tol);
        } catch (const SingularMatrix&) {
            throw SingularN2("verify_commutation_suite: N2 is numerically singular");
        }
    }
    const Matrix theta2d = pair.theta2.adjoint();
    const Matrix sandwich1d = pair.x.adjoint() * pair.theta1.adjoint() * pair.x;
    const Matrix sandwich1 = pair.x.adjoint() * pair.theta1 * pair.x;
    const Matrix sandwich2d = pair.x * theta2d * pair.x.adjoint();

    rep.residuals["[theta2,n2]"] = commutation_defect(pair.theta2, pair.n2);
    rep.residuals["[theta2,n2_inv]"] = commutation_defect(pair.theta2, n2inv);
    rep.residuals["[theta2_dag,n2]"] = commutation_defect(theta2d, pair.n2);
    rep.residuals["[theta2_dag,n2_inv]"] = commutation_defect(theta2d, n2inv);
    rep.residuals["[theta1_dag,n1]"] = commutation_defect(pair.theta1.adjoint(), pair.n1);
    rep.residuals["[xdag_theta1dag_x,n2]"] = commutation_defect(sandwich1d, pair.n2);
    rep.residuals["[xdag_theta1dag_x,n2_inv]"] = commutation_defect(sandwich1d, n2inv);
    rep.residuals["[x_theta2dag_xdag,n1]"] = commutation_defect(sandwich2d, pair.n1);
    rep.residuals["[xdag_theta1_x,n2]"] = commutation_defect(sandwich1, pair.n2);

    rep.pass = rep.max_residual() <= tol.residual_tol;
    return rep;
}

struct SelfAdjointnessReport {
    double delta1 = 0.0;  // ||Theta1 − Theta1†|| / ||Theta1||
    double delta2 = 0.0;
    bool hermitian1 = false;
    bool hermitian2 = false;
    bool equivalent = false;     // verdicts agree, the lemma's claim
    bool n2_invertible = false;  // lemma hypothesis; false in pseudo-inverse mode
};

/// Hermiticity defects of the two partners. The lemma asserts the verdicts
/// agree whenever N2 is invertible.
inline SelfAdjointnessReport selfadjointness_equivalence(const IntertwinePair& pair,
                                                         const Tolerances& tol = {}) {
    SelfAdjointnessReport rep;
    rep.delta1 = hermiticity_defect(pair.theta1);
    rep.delta2 = hermiticity_defect(pair.theta2);
    rep.hermitian1 = rep.delta1 <= tol.residual_tol;
    rep.hermitian2 = rep.delta2 <= tol.residual_tol;
    rep.equivalent = rep.hermitian1 == rep.hermitian2;
    rep.n2_invertible = pair.mode != PartnerMode::beta_pseudoinverse;
    return rep;
}

struct SpectralMatch {
    int index = 0;
    Complex family_value;
    Complex matched_eigenvalue;
    double distance = 0.0;
};

struct SpectralInclusionReport {
    std::vector<SpectralMatch> matches;
    double max_distance = 0.0;
    double threshold = 0.0;
    bool restricted = false;  // spectrum taken on span(F2)
    bool pass = false;
};

/// Every inherited eigenvalue of the transported family must appear in the
/// spectrum of Theta2; in beta_pseudoinverse mode Theta2 is restricted to
/// span(F2) first.
inline SpectralInclusionReport spectral_inclusion_check(const IntertwinePair& pair,
                                                        const EigenFamily& fam2,
                                                        const Tolerances& tol = {}) {
    SpectralInclusionReport rep;
    Vector spectrum;
    if (pair.mode == PartnerMode::beta_pseudoinverse) {
        const Matrix q = orthonormal_span(fam2.column_matrix(), tol);
        const Matrix restricted = q.adjoint() * pair.theta2 * q;
        spectrum = eig_general(restricted, tol).eigenvalues;
        rep.restricted = true;
    } else {
        spectrum = eig_general(pair.theta2, tol).eigenvalues;
    }
    double rho = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) rho = std::max(rho, std::abs(spectrum(i)));
    for (const auto& eps : fam2.eigenvalues) rho = std::max(rho, std::abs(eps));
    rep.threshold = tol.residual_tol * detail::safe_denom(rho);

    for (int k = 0; k < fam2.size(); ++k) {
        SpectralMatch m;
        m.index = fam2.indices[static_cast<size_t>(k)];
        m.family_value = fam2.eigenvalues[static_cast<size_t>(k)];
        m.distance = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < spectrum.size(); ++j) {
            const double d = std::abs(spectrum(j) - m.family_value);
            if (d < m.distance) {
                m.distance = d;
                m.matched_eigenvalue = spectrum(j);
            }
        }
        rep.max_distance = std::max(rep.max_distance, m.distance);
        rep.matches.push_back(m);
    }
    rep.pass = rep.max_distance <= rep.threshold;
    return rep;
}

/// Σ_n eps_n |v_n⟩⟨d_n|. With an orthonormal family and duals = vectors this
/// is the spectral synthesis; with a Riesz pair it rebuilds the operator from
/// its biorthogonal eigenfamilies.
inline Matrix synthesize_from_spectrum(const std::vector<Complex>& eigenvalues,
                                       const std::vector<Vector>& vectors,
                                       const std::vector<Vector>& duals,
                                       const Tolerances& tol = {}) {
    if (eigenvalues.size() != vectors.size() || vectors.size() != duals.size())
        throw DimensionMismatch("synthesize_from_spectrum: length mismatch");
    if (vectors.empty()) throw Error("synthesize_from_spectrum: empty input");
    const Eigen::Index d = vectors.front().size();
    Matrix gram(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(duals.size()));
    for (size_t n = 0; n < vectors.size(); ++n)
        for (size_t k = 0; k < duals.size(); ++k)
            gram(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                vectors[n].dot(duals[k]);
    const Matrix eye = Matrix::Identity(gram.rows(), gram.cols());
    if (op_norm(gram - eye) > tol.residual_tol * std::max(1.0, op_norm(gram)))
        throw BiorthogonalityViolated("synthesize_from_spectrum: ⟨v_n, d_k⟩ far from identity");

    Matrix m = Matrix::Zero(d, d);
    for (size_t n = 0; n < vectors.size(); ++n)
        m += eigenvalues[n] * (vectors[n] * duals[n].adjoint());
    return m;
}

struct CompletenessResult {
    bool complete = false;
    int rank = 0;
};

/// The family spans the space iff its column matrix has full numerical rank.
inline CompletenessResult completeness_check(const EigenFamily& fam, int dim,
                                             const Tolerances& tol = {}) {
    CompletenessResult res;
    res.rank = numerical_rank(fam.column_matrix(), tol);
    res.complete = res.rank == dim;
    return res;
}

/// Completeness with the guard-band directions granted for free: rank of the
/// family augmented by the canonical guard directions. A ladder family whose
/// only missing directions are truncation-corrupted top levels counts as
/// complete; genuinely missing low-lying directions still show up.
struct GuardedCompleteness {
    int rank = 0;            // honest numerical rank of the family alone
    int effective_rank = 0;  // rank of [family | guard directions]
    bool complete_mod_guard = false;
};

inline GuardedCompleteness guarded_completeness(const EigenFamily& fam, int dim, int guard,
                                                const Tolerances& tol = {}) {
    if (guard < 0 || guard >= dim) throw Error("guarded_completeness: need 0 <= guard < dim");
    GuardedCompleteness res;
    const Matrix cols = fam.column_matrix();
    res.rank = numerical_rank(cols, tol);
    Matrix aug(dim, cols.cols() + guard);
    if (cols.size() > 0) aug.leftCols(cols.cols()) = cols;
    for (int g = 0; g < guard; ++g)
        aug.col(cols.cols() + g) = Vector::Unit(dim, dim - guard + g);
    res.effective_rank = numerical_rank(aug, tol);
    res.complete_mod_guard = res.effective_rank == dim;
    return res;
}

/// True when the numerical kernel of m is confined to the guard-band
/// coordinates, i.e. m is invertible up to truncation artifacts.
inline bool invertible_mod_guard(const Matrix& m, int guard, const Tolerances& tol = {}) {
    require_square(m, "invertible_mod_guard");
    const int d = static_cast<int>(m.rows());
    if (guard < 0 || guard >= d) throw Error("invertible_mod_guard: need 0 <= guard < dim");
    const auto kernel = kernel_basis(m, tol);
    if (kernel.empty()) return true;
    Matrix k(d, static_cast<Eigen::Index>(kernel.size()));
    for (size_t j = 0; j < kernel.size(); ++j) k.col(static_cast<Eigen::Index>(j)) = kernel[j];
    // guard_projector keeps the leading (d - guard) coordinates: a kernel
    // confined to the guard band has no component there.
    return op_norm(guard_projector(d, guard) * k) <= std::sqrt(tol.rank_tol);
}

struct CorollaryReport {
    double residual_plain = 0.0;     // ||N2 − Σ P_n^(2)|| / ||N2||
    double residual_weighted = 0.0;  // ||N2 − Σ nu_n P̂_n^(2)|| / ||N2||
    bool pass = false;
};

/// N2 equals both Σ P_n^(2) and Σ nu_n P̂_n^(2) over the surviving index set,
/// provided the nu_n are pairwise distinct.
inline CorollaryReport corollary_n2_decomposition(const EigenFamily& fam2, const Matrix& n2,
                                                  const Tolerances& tol = {}) {
    fam2.validate();
    std::vector<double> nu = fam2.nu;
    if (nu.empty())
        for (const auto& v : fam2.vectors) nu.push_back(v.squaredNorm());
    double numax = 0.0;
    for (double v : nu) numax = std::max(numax, v);
    const auto flags = degenerate_flags(nu, tol.rank_tol * numax);
    for (bool f : flags)
        if (f) throw DegenerateNu("corollary_n2_decomposition: nu values not pairwise distinct");

    Matrix sum_plain = Matrix::Zero(n2.rows(), n2.cols());
    Matrix sum_weighted = Matrix::Zero(n2.rows(), n2.cols());
    for (size_t k = 0; k < fam2.vectors.size(); ++k) {
        sum_plain += projector(fam2.vectors[k]);
        sum_weighted += nu[k] * normalized_projector(fam2.vectors[k]);
    }
    const double den = detail::safe_denom(op_norm(n2));
    CorollaryReport rep;
    rep.residual_plain = op_norm(n2 - sum_plain) / den;
    rep.residual_weighted = op_norm(n2 - sum_weighted) / den;
    rep.pass = rep.residual_plain <= tol.residual_tol && rep.residual_weighted <= tol.residual_tol;
    return rep;
}

/// Worst relative residual of Theta2 (x† phi_n) = eps_n (x† phi_n) over the
/// transported family.
inline double transport_residual(const IntertwinePair& pair, const EigenFamily& fam2) {
    double worst = 0.0;
    const double nth = detail::safe_denom(op_norm(pair.theta2));
    for (int k = 0; k < fam2.size(); ++k) {
        const Vector& w = fam2.vectors[static_cast<size_t>(k)];
        const Complex eps = fam2.eigenvalues[static_cast<size_t>(k)];
        worst = std::max(worst, (pair.theta2 * w - eps * w).norm() / (nth * w.norm()));
    }
    return worst;
}

/// Relative distance between the alpha and beta constructions for an
/// invertible intertwiner; both exist and the paper says they coincide.
inline double alpha_beta_agreement(const Matrix& theta1, const Matrix& x,
                                   const Tolerances& tol = {}) {
    const Matrix alpha = inverse(x, tol) * theta1 * x;
    const Matrix n2 = x.adjoint() * x;
    const Matrix beta = inverse(n2, tol) * (x.adjoint() * theta1 * x);
    return relative_distance(alpha, beta);
}

}  // namespace itw
