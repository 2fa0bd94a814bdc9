#pragma once

#include <map>
#include <string>
#include <vector>

#include "itw/family.hpp"
#include "itw/linalg.hpp"
#include "itw/partner.hpp"
#include "itw/riesz.hpp"

namespace itw {

/// Truncated harmonic-oscillator ladder. The matrices are the infinite
/// operators restricted to the first d levels; the top rows/columns are left
/// as the defining action produces them, so identities are only asserted
/// inside the guard band.
struct LadderSystem {
    int dim = 0;
    Matrix lower;  // a, with a e_n = sqrt(n) e_{n-1}
    Matrix raise;  // adjoint(lower)
    Matrix h1;     // a† a, diagonal with entries 0..d-1
};

inline LadderSystem make_oscillator(int d) {
    if (d < 3) throw Error("make_oscillator: dimension must be at least 3");
    LadderSystem sys;
    sys.dim = d;
    sys.lower = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) sys.lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    sys.raise = sys.lower.adjoint();
    sys.h1 = sys.raise * sys.lower;
    return sys;
}

/// Canonical eigenfamily of h1: phi_n = e_n with eps_n = n.
inline EigenFamily ladder_family(const LadderSystem& sys) {
    std::vector<double> eps;
    for (int n = 0; n < sys.dim; ++n) eps.push_back(static_cast<double>(n));
    return canonical_family(eps);
}

/// q-deformed ladder system with B B† − q B† B = 1 on the guard-banded block.
struct QuonSystem {
    double q = 1.0;
    int dim = 0;
    Matrix b;   // B, with B e_n = beta_{n-1} e_{n-1} and B e_0 = 0
    Matrix h1;  // B† B, diagonal with entries eps_n
    std::vector<double> beta;  // beta_n² = 1 + q + ... + q^n
    std::vector<double> eps;   // eps_0 = 0, eps_n = 1 + q + ... + q^{n-1}
};

inline QuonSystem make_quon(int d, double q) {
    if (d < 3) throw Error("make_quon: dimension must be at least 3");
    if (q < 0.0 || q > 1.0) throw QOutOfRange("make_quon: q must lie in [0, 1]");
    QuonSystem sys;
    sys.q = q;
    sys.dim = d;
    // eps_{n+1} = 1 + q eps_n keeps the geometric sums exact at q = 1,
    // so the q = 1 system coincides entrywise with the oscillator.
    sys.eps.assign(static_cast<size_t>(d), 0.0);
    for (int n = 1; n < d; ++n)
        sys.eps[static_cast<size_t>(n)] = 1.0 + q * sys.eps[static_cast<size_t>(n - 1)];
    sys.beta.assign(static_cast<size_t>(d), 0.0);
    for (int n = 0; n < d; ++n) {
        const double b2 = n + 1 < d ? sys.eps[static_cast<size_t>(n + 1)]
                                    : 1.0 + q * sys.eps[static_cast<size_t>(n)];
        sys.beta[static_cast<size_t>(n)] = std::sqrt(b2);
    }
    sys.b = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) sys.b(n - 1, n) = sys.beta[static_cast<size_t>(n - 1)];
    sys.h1 = sys.b.adjoint() * sys.b;
    return sys;
}

inline EigenFamily quon_family(const QuonSystem& sys) { return canonical_family(sys.eps); }

enum class LadderDirection { raise, lower };

inline const char* to_string(LadderDirection d) {
    return d == LadderDirection::raise ? "raise" : "lower";
}

/// Closed-form comparison of a ladder-model partner construction.
struct LadderPartnerReport {
    LadderDirection direction = LadderDirection::raise;
    PartnerMode mode = PartnerMode::alpha;
    double closed_form_residual = 0.0;  // Theta2 against the closed form (relative)
    double n2_closed_form_residual = 0.0;  // N2 against its closed form on the guard block
    bool n2_invertible_mod_guard = false;
    GuardedCompleteness completeness;
    std::vector<int> gamma;  // indices dropped by the transport
    bool pass = false;
};

namespace detail {

inline LadderPartnerReport ladder_expectations(const Matrix& h1, const Matrix& x,
                                               const EigenFamily& fam1,
                                               const Matrix& theta2_closed,
                                               const Matrix& n2_closed,
                                               LadderDirection direction,
                                               const Tolerances& tol) {
    const int d = static_cast<int>(h1.rows());
    const int core = d - tol.guard;
    if (core <= 0) throw Error("ladder_expectations: guard too large for dimension");

    LadderPartnerReport rep;
    rep.direction = direction;
    const auto pair = build_partners(h1, x, tol);
    rep.mode = pair.mode;

    const auto transported = map_eigenfamily(x, fam1, tol);
    rep.gamma = transported.gamma;
    rep.completeness = guarded_completeness(transported.family, d, tol.guard, tol);
    rep.n2_invertible_mod_guard = invertible_mod_guard(pair.n2, tol.guard, tol);
    rep.n2_closed_form_residual = block_norm(pair.n2 - n2_closed, core) /
                                  detail::safe_denom(op_norm(n2_closed));

    if (direction == LadderDirection::raise) {
        rep.closed_form_residual = block_norm(pair.theta2 - theta2_closed, core) /
                                   detail::safe_denom(op_norm(theta2_closed));
        rep.pass = rep.closed_form_residual <= tol.residual_tol &&
                   rep.n2_closed_form_residual <= tol.residual_tol &&
                   rep.n2_invertible_mod_guard && rep.completeness.complete_mod_guard;
    } else {
        // The closed form is only claimed on the span of the transported family.
        const Matrix q = orthonormal_span(transported.family.column_matrix(), tol);
        const Matrix p = q * q.adjoint();
        rep.closed_form_residual = op_norm((pair.theta2 - theta2_closed) * p) /
                                   detail::safe_denom(op_norm(theta2_closed));
        rep.pass = rep.closed_form_residual <= tol.residual_tol &&
                   rep.mode == PartnerMode::beta_pseudoinverse &&
                   !rep.n2_invertible_mod_guard && !rep.completeness.complete_mod_guard;
    }
    return rep;
}

}  // namespace detail

/// x = a†: Theta2 = h1 + 1 on the guard block, complete transported family.
/// x = a:  Theta2 = h1 − 1 on span(F2), N2 genuinely singular.
inline LadderPartnerReport oscillator_partner_expectations(const LadderSystem& sys,
                                                           LadderDirection direction,
                                                           const Tolerances& tol = {}) {
    const Matrix eye = Matrix::Identity(sys.dim, sys.dim);
    if (direction == LadderDirection::raise)
        return detail::ladder_expectations(sys.h1, sys.raise, ladder_family(sys), sys.h1 + eye,
                                           sys.h1 + eye, direction, tol);
    return detail::ladder_expectations(sys.h1, sys.lower, ladder_family(sys), sys.h1 - eye,
                                       sys.h1, direction, tol);
}

/// x = B†: Theta2 = q h1 + 1 and N2 = 1 + q B†B on the guard block.
/// x = B:  Theta2 = (h1 − 1)/q on span(F2); requires q > rank_tol.
inline LadderPartnerReport quon_partner_expectations(const QuonSystem& sys,
                                                     LadderDirection direction,
                                                     const Tolerances& tol = {}) {
    const Matrix eye = Matrix::Identity(sys.dim, sys.dim);
    if (direction == LadderDirection::raise)
        return detail::ladder_expectations(sys.h1, sys.b.adjoint(), quon_family(sys),
                                           sys.q * sys.h1 + eye, eye + sys.q * sys.h1,
                                           direction, tol);
    if (sys.q <= tol.rank_tol)
        throw QOutOfRange("quon_partner_expectations: lower direction needs q > rank_tol");
    return detail::ladder_expectations(sys.h1, sys.b, quon_family(sys),
                                       (sys.h1 - eye) / sys.q, sys.h1, direction, tol);
}

/// Pseudo-boson system built from a Riesz generator t: the canonical ladder
/// pair conjugated by S^{±1/2} around the orthonormalized basis.
struct PseudoBosonSystem {
    Matrix t;
    Matrix s;        // frame operator t t†
    Matrix lower_a;  // a = S^{1/2} A S^{-1/2}
    Matrix raise_b;  // b = S^{1/2} A† S^{-1/2}
    Matrix theta1;   // b a
    Matrix theta2;   // a† b†
    EigenFamily f1;  // phi_n^(1) = b^n phi_0 / sqrt(n!)
    EigenFamily f2;  // phi_n^(2) = (a†)^n phi_0^(2) / sqrt(n!)

    int dim() const { return static_cast<int>(t.rows()); }
};

inline PseudoBosonSystem make_pseudoboson(const Matrix& t, const Tolerances& tol = {}) {
    require_square(t, "make_pseudoboson");
    const int d = static_cast<int>(t.rows());
    if (d < 3) throw Error("make_pseudoboson: dimension must be at least 3");
    if (d > 34) throw Error("make_pseudoboson: dimension capped at 34 (floating-point factorials)");

    PseudoBosonSystem sys;
    sys.t = t;
    sys.s = t * t.adjoint();
    const Matrix shalf = sqrt_positive(sys.s, tol);
    const Matrix shalf_inv = inverse(shalf, tol);  // throws SingularMatrix when t is singular

    const LadderSystem canonical = make_oscillator(d);
    const Matrix v = shalf_inv * t;  // unitary: maps e_n to the orthonormalized basis
    const Matrix ladder_a = v * canonical.lower * v.adjoint();
    sys.lower_a = shalf * ladder_a * shalf_inv;
    sys.raise_b = shalf * ladder_a.adjoint() * shalf_inv;
    sys.theta1 = sys.raise_b * sys.lower_a;
    sys.theta2 = sys.lower_a.adjoint() * sys.raise_b.adjoint();

    const Matrix sinv = inverse(sys.s, tol);
    Vector phi1 = t.col(0);
    Vector phi2 = sinv * phi1;
    const Matrix adag = sys.lower_a.adjoint();
    for (int n = 0; n < d; ++n) {
        sys.f1.indices.push_back(n);
        sys.f1.vectors.push_back(phi1);
        sys.f1.eigenvalues.push_back(Complex(n, 0.0));
        sys.f2.indices.push_back(n);
        sys.f2.vectors.push_back(phi2);
        sys.f2.eigenvalues.push_back(Complex(n, 0.0));
        if (n + 1 < d) {
            const double root = std::sqrt(static_cast<double>(n + 1));
            phi1 = (sys.raise_b * phi1) / root;
            phi2 = (adag * phi2) / root;
        }
    }
    return sys;
}

struct PseudoBosonVerifyReport {
    std::map<std::string, double> residuals;
    bool pass = false;

    double max_residual() const {
        double m = 0.0;
        for (const auto& [k, v] : residuals) m = std::max(m, v);
        return m;
    }
};

/// Residual suite for a pseudo-boson system: deformed commutator, adjoint
/// pairing of the two partners, the frame operator acting as intertwiner,
/// S⁻¹-pseudo-hermiticity, biorthogonality of (F1, F2) and ladder actions.
inline PseudoBosonVerifyReport pseudoboson_verify(const PseudoBosonSystem& sys,
                                                  const Tolerances& tol = {}) {
    PseudoBosonVerifyReport rep;
    const int d = sys.dim();
    const int core = d - tol.guard;
    if (core <= 0) throw Error("pseudoboson_verify: guard too large for dimension");
    const Matrix eye = Matrix::Identity(d, d);

    // Truncation corrupts [a,b] along the top family direction
    // |phi_{d-1}⟩⟨phi~_{d-1}|, so the guard band lives in the family frame:
    // pull the commutator back through t (a = t a_c t⁻¹) before blocking.
    const Matrix tinv = inverse(sys.t, tol);
    const Matrix ab_comm = sys.lower_a * sys.raise_b - sys.raise_b * sys.lower_a;
    rep.residuals["ab_commutator_block"] = block_norm(tinv * ab_comm * sys.t - eye, core);
    rep.residuals["theta2_adjoint"] = relative_distance(sys.theta2, sys.theta1.adjoint());
    rep.residuals["intertwine_s"] =
        op_norm(sys.theta1 * sys.s - sys.s * sys.theta2) /
        detail::safe_denom(op_norm(sys.s) * op_norm(sys.theta1));

    const Matrix sinv = inverse(sys.s, tol);
    rep.residuals["pseudo_hermiticity"] = pseudo_hermiticity_check(sys.theta1, sinv, tol).residual;

    Matrix gram(d, d);
    for (int n = 0; n < d; ++n)
        for (int k = 0; k < d; ++k)
            gram(n, k) = sys.f1.vectors[static_cast<size_t>(n)].dot(
                sys.f2.vectors[static_cast<size_t>(k)]);
    rep.residuals["biorthogonality"] = op_norm(gram - eye);

    double consistency = 0.0;
    for (int n = 0; n < d; ++n) {
        const Vector ref = sinv * sys.f1.vectors[static_cast<size_t>(n)];
        consistency = std::max(consistency,
                               (sys.f2.vectors[static_cast<size_t>(n)] - ref).norm() /
                                   detail::safe_denom(ref.norm()));
    }
    rep.residuals["f2_consistency"] = consistency;

    const double na = detail::safe_denom(op_norm(sys.lower_a));
    const double nb = detail::safe_denom(op_norm(sys.raise_b));
    const double nth1 = detail::safe_denom(op_norm(sys.theta1));
    const double nth2 = detail::safe_denom(op_norm(sys.theta2));
    double lower_res = (sys.lower_a * sys.f1.vectors[0]).norm() /
                       (na * sys.f1.vectors[0].norm());
    double raise_res = 0.0;
    double eig1 = 0.0;
    double eig2 = 0.0;
    for (int n = 0; n < core; ++n) {
        const Vector& phi = sys.f1.vectors[static_cast<size_t>(n)];
        if (n >= 1) {
            const Vector expect = std::sqrt(static_cast<double>(n)) *
                                  sys.f1.vectors[static_cast<size_t>(n - 1)];
            lower_res = std::max(lower_res,
                                 (sys.lower_a * phi - expect).norm() / (na * phi.norm()));
        }
        if (n + 1 < d) {
            const Vector expect = std::sqrt(static_cast<double>(n + 1)) *
                                  sys.f1.vectors[static_cast<size_t>(n + 1)];
            raise_res = std::max(raise_res,
                                 (sys.raise_b * phi - expect).norm() / (nb * phi.norm()));
        }
        const Complex eps(n, 0.0);
        eig1 = std::max(eig1, (sys.theta1 * phi - eps * phi).norm() / (nth1 * phi.norm()));
        const Vector& psi = sys.f2.vectors[static_cast<size_t>(n)];
        eig2 = std::max(eig2, (sys.theta2 * psi - eps * psi).norm() / (nth2 * psi.norm()));
    }
    rep.residuals["ladder_lower"] = lower_res;
    rep.residuals["ladder_raise"] = raise_res;
    rep.residuals["eigen_theta1"] = eig1;
    rep.residuals["eigen_theta2"] = eig2;

    rep.pass = rep.max_residual() <= tol.residual_tol;
    return rep;
}

/// ||[Theta1, S⁻²]|| (relative): zero exactly when the no-go hypothesis holds,
/// strictly positive for generic generators.
inline double pseudoboson_nogo_defect(const PseudoBosonSystem& sys, const Tolerances& tol = {}) {
    const Matrix sinv2 = inverse(sys.s * sys.s, tol);
    return commutation_defect(sys.theta1, sinv2);
}

}  // namespace itw
