#pragma once

#include <string>
#include <vector>

#include "itw/linalg.hpp"
#include "itw/partner.hpp"
#include "itw/rng.hpp"

namespace itw {

/// Riesz basis {phi_n = T e_n} with its frame operator S = T T† and frame
/// bounds. At finite dimension "bounded with bounded inverse" means
/// invertible under rank_tol; boundedness is recorded as the condition
/// number of T.
struct RieszBasis {
    Matrix t;
    Matrix frame_op;  // S = t t†, Hermitian positive definite
    Matrix t_dual;    // S⁻¹ t, generator of the biorthogonal basis
    double bound_lower = 0.0;  // A = λ_min(S)
    double bound_upper = 0.0;  // B = λ_max(S)
    double condition_number = 0.0;  // κ(t)

    int dim() const { return static_cast<int>(t.rows()); }
    Vector vector(int n) const { return t.col(n); }
};

inline RieszBasis build_riesz(const Matrix& t, const Tolerances& tol = {}) {
    require_square(t, "build_riesz");
    Eigen::JacobiSVD<Matrix> svd(t);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) <= tol.rank_tol * sv(0))
        throw SingularMatrix("build_riesz: generator is numerically singular");

    RieszBasis basis;
    basis.t = t;
    basis.frame_op = t * t.adjoint();
    basis.condition_number = sv(0) / sv(sv.size() - 1);
    const auto es = eig_hermitian(basis.frame_op, tol);
    basis.bound_lower = es.eigenvalues(0);
    basis.bound_upper = es.eigenvalues(es.eigenvalues.size() - 1);
    basis.t_dual = inverse(basis.frame_op, tol) * t;
    return basis;
}

/// Biorthogonal family phi~_n = S⁻¹ phi_n, itself a Riesz basis with
/// generator T~ = S⁻¹ T.
struct DualBasis {
    Matrix vectors;    // columns phi~_n
    Matrix generator;  // T~ = S⁻¹ T
    double biorthogonality_residual = 0.0;  // ||⟨phi_n, phi~_k⟩ − δ||
};

inline DualBasis dual_basis(const RieszBasis& basis, const Tolerances& tol = {}) {
    DualBasis dual;
    dual.generator = basis.t_dual;
    dual.vectors = basis.t_dual;
    const Matrix gram = basis.t.adjoint() * dual.vectors;
    dual.biorthogonality_residual =
        op_norm(gram - Matrix::Identity(gram.rows(), gram.cols()));
    (void)tol;
    return dual;
}

struct FrameInequalityReport {
    double min_ratio = 0.0;  // smallest observed Σ|⟨phi_n, f⟩|² on unit probes
    double max_ratio = 0.0;
    double max_quadratic_form_defect = 0.0;  // |Σ − ⟨f, S f⟩| (relative)
    bool pass = false;
};

/// Checks A ≤ Σ_n |⟨phi_n, f⟩|² ≤ B on random unit probes, and that the sum
/// equals the frame-operator quadratic form.
inline FrameInequalityReport frame_inequality_check(const RieszBasis& basis, int samples,
                                                    const Tolerances& tol = {},
                                                    std::uint64_t seed = 0) {
    FrameInequalityReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    SplitMix64 gen(seed);
    const int d = basis.dim();
    const double slack = tol.residual_tol * std::max(1.0, basis.bound_upper);
    bool ok = true;
    for (int s = 0; s < samples; ++s) {
        const Vector f = random_unit_vector(gen, d);
        double sum = 0.0;
        for (int n = 0; n < d; ++n) sum += std::norm(basis.vector(n).dot(f));
        const double quad = std::real(f.dot(basis.frame_op * f));
        rep.min_ratio = std::min(rep.min_ratio, sum);
        rep.max_ratio = std::max(rep.max_ratio, sum);
        rep.max_quadratic_form_defect =
            std::max(rep.max_quadratic_form_defect,
                     std::abs(sum - quad) / detail::safe_denom(std::abs(quad)));
        if (sum < basis.bound_lower - slack || sum > basis.bound_upper + slack) ok = false;
    }
    rep.pass = ok && rep.max_quadratic_form_defect <= tol.residual_tol * 100.0;
    return rep;
}

struct ResolutionReport {
    double left_residual = 0.0;   // ||Σ |phi~_n⟩⟨phi_n| − 1||
    double right_residual = 0.0;  // ||Σ |phi_n⟩⟨phi~_n| − 1||
    bool pass = false;
};

inline ResolutionReport resolution_identity_check(const RieszBasis& basis, const DualBasis& dual,
                                                  const Tolerances& tol = {}) {
    const int d = basis.dim();
    Matrix left = Matrix::Zero(d, d);
    Matrix right = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        left += dual.vectors.col(n) * basis.vector(n).adjoint();
        right += basis.vector(n) * dual.vectors.col(n).adjoint();
    }
    ResolutionReport rep;
    const Matrix eye = Matrix::Identity(d, d);
    rep.left_residual = op_norm(left - eye);
    rep.right_residual = op_norm(right - eye);
    rep.pass = rep.left_residual <= tol.residual_tol && rep.right_residual <= tol.residual_tol;
    return rep;
}

struct BiorthogonalCriterionReport {
    double dist_x_sinv = 0.0;       // ||x − S⁻¹|| / ||S⁻¹||
    double gram_residual = 0.0;     // ||⟨phi_n, x† phi_k⟩ − δ||
    bool x_is_sinv = false;         // (a)
    bool f2_biorthogonal = false;   // (b), Gram part
    bool f2_riesz = false;          // (b), generator x† T invertible
    bool equivalent = false;        // (a) ⇔ (b)
};

/// The lemma: x = S⁻¹ exactly when the transported family is a Riesz basis
/// biorthogonal to F1.
inline BiorthogonalCriterionReport biorthogonal_criterion(const RieszBasis& basis,
                                                          const Matrix& x,
                                                          const Tolerances& tol = {}) {
    BiorthogonalCriterionReport rep;
    const Matrix sinv = inverse(basis.frame_op, tol);
    rep.dist_x_sinv = op_norm(x - sinv) / detail::safe_denom(op_norm(sinv));
    rep.x_is_sinv = rep.dist_x_sinv <= tol.residual_tol;

    const Matrix f2 = x.adjoint() * basis.t;
    const Matrix gram = basis.t.adjoint() * f2;
    rep.gram_residual = op_norm(gram - Matrix::Identity(gram.rows(), gram.cols()));
    rep.f2_biorthogonal = rep.gram_residual <= tol.residual_tol * std::max(1.0, op_norm(gram));
    rep.f2_riesz = numerical_rank(f2, tol) == basis.dim();
    rep.equivalent = rep.x_is_sinv == (rep.f2_biorthogonal && rep.f2_riesz);
    return rep;
}

struct NogoReport {
    double hypothesis_defect = 0.0;   // ||[Theta1, S⁻²]|| (relative)
    double eigenfamily_defect = 0.0;  // worst eigenvector residual of the basis
    double commutator_x = 0.0;        // ||[Theta1, S⁻¹]|| (relative)
    double theta2_distance = 0.0;     // ||Theta2 − Theta1|| (relative)
    double min_parallelism = 0.0;     // min_n |⟨phî_n^(2), phî_n^(1)⟩|
    bool pass = false;
};

/// The no-go result: with x = S⁻¹ and [Theta1, N1] = 0 the construction is
/// trivial: Theta2 = Theta1 and each transported vector stays on its line.
/// Refuses (HypothesisViolated) when the commutation hypothesis fails or the
/// basis is not an eigenfamily of theta1.
inline NogoReport nogo_check(const RieszBasis& basis, const Matrix& theta1,
                             const Tolerances& tol = {}) {
    require_same_dim(basis.t, theta1, "nogo_check");
    NogoReport rep;
    const Matrix sinv = inverse(basis.frame_op, tol);
    const Matrix sinv2 = sinv * sinv;
    rep.hypothesis_defect = commutation_defect(theta1, sinv2);
    if (rep.hypothesis_defect > tol.commute_tol)
        throw HypothesisViolated("nogo_check: [Theta1, S^-2] defect " +
                                 std::to_string(rep.hypothesis_defect) + " above tolerance");

    const double nth = detail::safe_denom(op_norm(theta1));
    for (int n = 0; n < basis.dim(); ++n) {
        const Vector phi = basis.vector(n);
        const Complex eps = phi.dot(theta1 * phi) / phi.squaredNorm();
        rep.eigenfamily_defect = std::max(
            rep.eigenfamily_defect, (theta1 * phi - eps * phi).norm() / (nth * phi.norm()));
    }
    if (rep.eigenfamily_defect > tol.commute_tol)
        throw HypothesisViolated("nogo_check: basis vectors are not eigenvectors of Theta1");

    const auto pair = build_partners(theta1, sinv, tol, /*allow_commutator_defect=*/true);
    rep.commutator_x = commutation_defect(theta1, sinv);
    rep.theta2_distance = relative_distance(pair.theta2, theta1);

    rep.min_parallelism = 1.0;
    const Matrix xd = sinv.adjoint();
    for (int n = 0; n < basis.dim(); ++n) {
        const Vector phi = basis.vector(n);
        const Vector w = xd * phi;
        const double p = std::abs(w.dot(phi)) / detail::safe_denom(w.norm() * phi.norm());
        rep.min_parallelism = std::min(rep.min_parallelism, p);
    }
    rep.pass = rep.commutator_x <= tol.residual_tol && rep.theta2_distance <= tol.residual_tol &&
               rep.min_parallelism >= 1.0 - tol.residual_tol;
    return rep;
}

/// Certificate that theta is metric-pseudo-hermitian: residual of
/// M Theta − Theta† M together with the hermitizing similar form.
struct PseudoHermitianCert {
    Matrix metric;
    double residual = 0.0;  // ||M Theta − Theta† M|| / (||M||·||Theta||)
    Matrix similar_form;    // M^{1/2} Theta M^{−1/2}
    bool pass = false;
};

inline PseudoHermitianCert pseudo_hermiticity_check(const Matrix& theta, const Matrix& metric,
                                                    const Tolerances& tol = {}) {
    require_same_dim(theta, metric, "pseudo_hermiticity_check");
    if (hermiticity_defect(metric) > tol.commute_tol)
        throw BadMetric("pseudo_hermiticity_check: metric not Hermitian");
    const auto es = eig_hermitian(metric, tol);
    if (es.eigenvalues(0) <= tol.rank_tol * es.eigenvalues(es.eigenvalues.size() - 1))
        throw BadMetric("pseudo_hermiticity_check: metric not positive definite");

    PseudoHermitianCert cert;
    cert.metric = metric;
    cert.residual = op_norm(metric * theta - theta.adjoint() * metric) /
                    detail::safe_denom(op_norm(metric) * op_norm(theta));
    const Matrix mhalf = sqrt_positive(metric, tol);
    cert.similar_form = mhalf * theta * inverse(mhalf, tol);
    cert.pass = cert.residual <= tol.residual_tol;
    return cert;
}

struct RieszEigenbasis {
    RieszBasis basis;                 // generator t·W, columns are eigenvectors of theta1
    std::vector<double> eigenvalues;  // real, ascending
    double max_eigen_residual = 0.0;
};

/// Converse direction: a (T T†)⁻¹-pseudo-hermitian operator whose similar
/// form T⁻¹ Theta1 T is Hermitian admits a Riesz eigenbasis with real
/// eigenvalues. Returns that basis.
inline RieszEigenbasis riesz_from_pseudohermitian(const Matrix& theta1, const Matrix& t,
                                                  const Tolerances& tol = {}) {
    require_same_dim(theta1, t, "riesz_from_pseudohermitian");
    const Matrix s = t * t.adjoint();
    const Matrix metric = inverse(s, tol);
    const auto cert = pseudo_hermiticity_check(theta1, metric, tol);
    if (!cert.pass)
        throw NotPseudoHermitian("riesz_from_pseudohermitian: residual " +
                                 std::to_string(cert.residual) + " above tolerance");

    const Matrix theta_t = inverse(t, tol) * theta1 * t;
    if (hermiticity_defect(theta_t) > tol.commute_tol)
        throw SimilarFormNotHermitian("riesz_from_pseudohermitian: T^-1 Theta1 T not Hermitian");

    const auto es = eig_hermitian(theta_t, tol);
    RieszEigenbasis out;
    out.basis = build_riesz(t * es.eigenvectors, tol);
    const double nth = detail::safe_denom(op_norm(theta1));
    for (Eigen::Index n = 0; n < es.eigenvalues.size(); ++n) {
        out.eigenvalues.push_back(es.eigenvalues(n));
        const Vector phi = out.basis.vector(static_cast<int>(n));
        out.max_eigen_residual =
            std::max(out.max_eigen_residual,
                     (theta1 * phi - Complex(es.eigenvalues(n), 0.0) * phi).norm() /
                         (nth * phi.norm()));
    }
    return out;
}

struct RieszTransportReport {
    bool f2_riesz = false;             // generator x†·(t W) invertible
    double generator_condition = 0.0;  // κ(x†·t W)
    double max_eigen_residual = 0.0;   // Theta2 eigenvector residual over F2
    double max_imag = 0.0;             // largest |Im eps_n|
    double theta2_vs_theta1 = 0.0;     // contrast with the no-go situation
    bool pass = false;
};

/// Transport through an invertible x: F2 = {x† phi_n} is again a Riesz basis
/// of eigenvectors of Theta2 = x⁻¹ Theta1 x, with the same real eigenvalues.
inline RieszTransportReport corollary_riesz_transport(const Matrix& theta1, const Matrix& t,
                                                      const Matrix& x,
                                                      const Tolerances& tol = {}) {
    const Matrix xinv = inverse(x, tol);  // x must be invertible
    const auto eigenbasis = riesz_from_pseudohermitian(theta1, t, tol);

    const double defect = commutation_defect(x * x.adjoint(), theta1);
    if (defect > tol.commute_tol)
        throw CommutatorTooLarge("corollary_riesz_transport: [N1, Theta1] defect " +
                                     std::to_string(defect) + " above tolerance",
                                 defect);

    const Matrix theta2 = xinv * theta1 * x;
    const Matrix gen = x.adjoint() * eigenbasis.basis.t;

    RieszTransportReport rep;
    Eigen::JacobiSVD<Matrix> svd(gen);
    const auto& sv = svd.singularValues();
    rep.f2_riesz = sv(0) > 0.0 && sv(sv.size() - 1) > tol.rank_tol * sv(0);
    rep.generator_condition = rep.f2_riesz ? sv(0) / sv(sv.size() - 1) : 0.0;

    const double nth = detail::safe_denom(op_norm(theta2));
    for (size_t n = 0; n < eigenbasis.eigenvalues.size(); ++n) {
        const Vector w = gen.col(static_cast<Eigen::Index>(n));
        const Complex eps(eigenbasis.eigenvalues[n], 0.0);
        rep.max_eigen_residual =
            std::max(rep.max_eigen_residual, (theta2 * w - eps * w).norm() / (nth * w.norm()));
        rep.max_imag = std::max(rep.max_imag, std::abs(eps.imag()));
    }
    rep.theta2_vs_theta1 = relative_distance(theta2, theta1);
    rep.pass = rep.f2_riesz && rep.max_eigen_residual <= tol.residual_tol &&
               rep.max_imag <= tol.residual_tol;
    return rep;
}

}  // namespace itw
