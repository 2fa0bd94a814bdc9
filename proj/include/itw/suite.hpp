#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itw/models.hpp"
#include "itw/partner.hpp"
#include "itw/report.hpp"
#include "itw/riesz.hpp"
#include "itw/rng.hpp"

namespace itw {

struct SuiteConfig {
    int dim = 12;
    double q = 0.5;
    std::uint64_t seed = 42;
    Tolerances tol;
};

namespace detail {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    if (a.size() != b.size()) m = std::numeric_limits<double>::infinity();
    return m;
}

/// Worst residual of N2 w = nu w over a transported family carrying nu.
inline double n2_eigen_residual(const IntertwinePair& pair, const EigenFamily& fam2) {
    double worst = 0.0;
    const double nn = safe_denom(op_norm(pair.n2));
    for (int k = 0; k < fam2.size(); ++k) {
        const Vector& w = fam2.vectors[static_cast<size_t>(k)];
        const double nu = fam2.nu[static_cast<size_t>(k)];
        worst = std::max(worst, (pair.n2 * w - nu * w).norm() / (nn * w.norm()));
    }
    return worst;
}

/// ||Gram(normalized family) − I||.
inline double orthonormality_defect(const EigenFamily& fam) {
    const int m = fam.size();
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            gram(i, j) = fam.vectors[static_cast<size_t>(i)].dot(fam.vectors[static_cast<size_t>(j)]) /
                         (fam.vectors[static_cast<size_t>(i)].norm() *
                          fam.vectors[static_cast<size_t>(j)].norm());
    return op_norm(gram - Matrix::Identity(m, m));
}

}  // namespace detail

inline void suite_oscillator_checks(Report& rep, const SuiteConfig& cfg) {
    const Tolerances& tol = cfg.tol;
    const auto sys = make_oscillator(cfg.dim);
    const auto fam1 = ladder_family(sys);

    const auto raise_rep = oscillator_partner_expectations(sys, LadderDirection::raise, tol);
    rep.add(CheckResult::below("osc_raise_theta2_closed_form", raise_rep.closed_form_residual,
                               tol.residual_tol));
    rep.add(CheckResult::below("osc_raise_n2_closed_form", raise_rep.n2_closed_form_residual,
                               tol.residual_tol));
    rep.add(CheckResult::boolean("osc_raise_n2_invertible_mod_guard",
                                 raise_rep.n2_invertible_mod_guard));
    rep.add(CheckResult::boolean("osc_raise_complete_mod_guard",
                                 raise_rep.completeness.complete_mod_guard));

    const auto pair_raise = build_partners(sys.h1, sys.raise, tol);
    const auto mapped_raise = map_eigenfamily(sys.raise, fam1, tol);
    rep.index_sets.emplace_back("osc_raise_gamma", mapped_raise.gamma);
    const auto itw_raise = verify_intertwining(pair_raise, tol);
    rep.add(CheckResult::below("osc_raise_intertwine_x_theta2", itw_raise.defect_x_theta2,
                               tol.residual_tol));
    rep.add(CheckResult::below("osc_raise_intertwine_theta2_xdag", itw_raise.defect_theta2_xdag,
                               tol.residual_tol));
    rep.add(CheckResult::below("osc_raise_transport", transport_residual(pair_raise, mapped_raise.family),
                               tol.residual_tol));
    rep.add(CheckResult::below("osc_raise_n2_eigen", detail::n2_eigen_residual(pair_raise, mapped_raise.family),
                               tol.residual_tol));

    std::vector<double> nu_expected;
    for (int n = 0; n < cfg.dim; ++n) nu_expected.push_back(static_cast<double>(n));
    rep.add(CheckResult::below("osc_raise_nu_closed_form",
                               detail::max_abs_diff(nu_values(sys.raise, fam1), nu_expected),
                               tol.residual_tol * cfg.dim));

    const auto kernels = kernel_equivalence_check(sys.raise, fam1, tol);
    rep.index_sets.emplace_back("osc_raise_kernel_xdag", kernels.kernel_xdag);
    rep.add(CheckResult::boolean("osc_raise_kernel_sets",
                                 kernels.equal && kernels.kernel_xdag == std::vector<int>{0}));

    const auto corol = corollary_n2_decomposition(mapped_raise.family, pair_raise.n2, tol);
    rep.add(CheckResult::below("osc_raise_corollary_plain", corol.residual_plain, tol.residual_tol));
    rep.add(CheckResult::below("osc_raise_corollary_weighted", corol.residual_weighted,
                               tol.residual_tol));

    const auto recovered = recover_family1(sys.raise, mapped_raise.family, tol);
    double rec_res = 0.0;
    for (int k = 0; k < recovered.size(); ++k) {
        const auto pos = fam1.position_of(recovered.indices[static_cast<size_t>(k)]);
        const Vector& ref = fam1.vectors[static_cast<size_t>(*pos)];
        rec_res = std::max(rec_res, (recovered.vectors[static_cast<size_t>(k)] - ref).norm());
    }
    rep.add(CheckResult::below("osc_raise_recover_family", rec_res, tol.residual_tol));

    const auto lower_rep = oscillator_partner_expectations(sys, LadderDirection::lower, tol);
    rep.add(CheckResult::below("osc_lower_theta2_closed_form", lower_rep.closed_form_residual,
                               tol.residual_tol));
    rep.add(CheckResult::boolean("osc_lower_mode_pseudoinverse",
                                 lower_rep.mode == PartnerMode::beta_pseudoinverse));
    rep.add(CheckResult::boolean("osc_lower_rank_deficit",
                                 lower_rep.completeness.rank == cfg.dim - 1 &&
                                     !lower_rep.completeness.complete_mod_guard));

    const auto pair_lower = build_partners(sys.h1, sys.lower, tol);
    const auto mapped_lower = map_eigenfamily(sys.lower, fam1, tol);
    const auto incl = spectral_inclusion_check(pair_lower, mapped_lower.family, tol);
    rep.add(CheckResult::below("osc_lower_spectral_inclusion", incl.max_distance, incl.threshold));

    // Spectral synthesis rebuilds h1 from its canonical eigenpairs.
    std::vector<Complex> eps;
    std::vector<Vector> vecs;
    for (int n = 0; n < cfg.dim; ++n) {
        eps.push_back(Complex(n, 0.0));
        vecs.push_back(Vector::Unit(cfg.dim, n));
    }
    const Matrix synth = synthesize_from_spectrum(eps, vecs, vecs, tol);
    rep.add(CheckResult::below("osc_synthesize_h1", relative_distance(synth, sys.h1),
                               tol.residual_tol));
}

inline void suite_quon_checks(Report& rep, const SuiteConfig& cfg) {
    const Tolerances& tol = cfg.tol;
    const auto sys = make_quon(cfg.dim, cfg.q);

    std::vector<double> spectrum;
    const auto es = eig_hermitian(sys.h1, tol);
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) spectrum.push_back(es.eigenvalues(i));
    std::vector<double> eps_sorted = sys.eps;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    rep.add(CheckResult::below("quon_spectrum_closed_form",
                               detail::max_abs_diff(spectrum, eps_sorted), tol.residual_tol * 10));
    rep.value_lists.emplace_back("quon_eps", sys.eps);

    const auto raise_rep = quon_partner_expectations(sys, LadderDirection::raise, tol);
    rep.add(CheckResult::below("quon_raise_theta2_closed_form", raise_rep.closed_form_residual,
                               tol.residual_tol));
    rep.add(CheckResult::below("quon_raise_n2_closed_form", raise_rep.n2_closed_form_residual,
                               tol.residual_tol));
    rep.add(CheckResult::boolean("quon_raise_n2_invertible_mod_guard",
                                 raise_rep.n2_invertible_mod_guard));
    rep.add(CheckResult::boolean("quon_raise_complete_mod_guard",
                                 raise_rep.completeness.complete_mod_guard));

    if (cfg.q > tol.rank_tol) {
        const auto lower_rep = quon_partner_expectations(sys, LadderDirection::lower, tol);
        rep.add(CheckResult::below("quon_lower_theta2_closed_form", lower_rep.closed_form_residual,
                                   tol.residual_tol));
        rep.add(CheckResult::boolean("quon_lower_mode_pseudoinverse",
                                     lower_rep.mode == PartnerMode::beta_pseudoinverse));
    } else {
        bool rejected = false;
        try {
            (void)quon_partner_expectations(sys, LadderDirection::lower, tol);
        } catch (const QOutOfRange&) {
            rejected = true;
        }
        rep.add(CheckResult::boolean("quon_lower_rejected_at_q0", rejected));
    }

    // x = B: N1 = B B† equals the q-deformed commutator plus q N2 entrywise.
    const Matrix n1 = sys.b * sys.b.adjoint();
    const Matrix n2 = sys.b.adjoint() * sys.b;
    const Matrix qcomm = n1 - cfg.q * n2;
    rep.add(CheckResult::below("quon_deformed_commutator_identity",
                               block_norm(n1 - (qcomm + cfg.q * n2), cfg.dim - tol.guard),
                               tol.residual_tol));
    rep.add(CheckResult::below("quon_qcomm_is_identity_on_block",
                               block_norm(qcomm - Matrix::Identity(cfg.dim, cfg.dim),
                                          cfg.dim - tol.guard),
                               tol.residual_tol));

    const auto osc = make_oscillator(cfg.dim);
    const auto q1 = make_quon(cfg.dim, 1.0);
    rep.add(CheckResult::below("quon_q1_reduces_to_oscillator",
                               relative_distance(q1.b, osc.lower), tol.residual_tol));

    const auto fam1 = quon_family(sys);
    std::vector<double> nu_expected(static_cast<size_t>(cfg.dim), 0.0);
    for (int n = 1; n < cfg.dim; ++n) nu_expected[static_cast<size_t>(n)] = sys.eps[static_cast<size_t>(n)];
    rep.add(CheckResult::below("quon_raise_nu_closed_form",
                               detail::max_abs_diff(nu_values(sys.b.adjoint(), fam1), nu_expected),
                               tol.residual_tol * 10));

    const auto pair = build_partners(sys.h1, sys.b.adjoint(), tol);
    const auto csuite = verify_commutation_suite(pair, tol);
    rep.add(CheckResult::below("quon_commutation_suite_max", csuite.max_residual(),
                               tol.residual_tol));

    if (cfg.q > 1e-2) {
        const auto mapped = map_eigenfamily(sys.b.adjoint(), fam1, tol);
        const auto corol = corollary_n2_decomposition(mapped.family, pair.n2, tol);
        rep.add(CheckResult::below("quon_raise_corollary_max",
                                   std::max(corol.residual_plain, corol.residual_weighted),
                                   tol.residual_tol));
    } else {
        // nu values collide as q -> 0; the corollary is skipped, not guessed.
        bool flagged = false;
        try {
            const auto mapped = map_eigenfamily(sys.b.adjoint(), fam1, tol);
            (void)corollary_n2_decomposition(mapped.family, pair.n2, tol);
        } catch (const DegenerateNu&) {
            flagged = true;
        }
        rep.add(CheckResult::boolean("quon_corollary_degenerate_nu_flagged", flagged));
    }
}

inline void suite_pseudoboson_checks(Report& rep, const SuiteConfig& cfg, SplitMix64& gen) {
    const Tolerances& tol = cfg.tol;
    const Matrix t = random_matrix_with_condition(gen, cfg.dim, 10.0);
    const auto sys = make_pseudoboson(t, tol);
    const auto verify = pseudoboson_verify(sys, tol);
    for (const auto& [name, value] : verify.residuals)
        rep.add(CheckResult::below("pb_" + name, value, tol.residual_tol));

    const auto spec = eig_general(sys.theta1, tol);
    std::vector<Complex> theta1_eigs;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
        theta1_eigs.push_back(spec.eigenvalues(i));
    rep.spectra.emplace_back("pseudoboson_theta1", theta1_eigs);
    double int_match = 0.0;
    for (int n = 0; n < cfg.dim - tol.guard; ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& z : theta1_eigs) best = std::min(best, std::abs(z - Complex(n, 0.0)));
        int_match = std::max(int_match, best);
    }
    rep.add(CheckResult::below("pb_spectrum_integers", int_match, 1e-7));

    rep.add(CheckResult::above("pb_generic_nogo_defect", pseudoboson_nogo_defect(sys, tol), 1e-3));

    const auto basis = build_riesz(t, tol);
    rep.set_frame_bounds(basis.bound_lower, basis.bound_upper);

    const Matrix td = random_positive_diagonal(gen, cfg.dim, 4.0);
    const auto dsys = make_pseudoboson(td, tol);
    rep.add(CheckResult::below("pb_diagonal_nogo_defect", pseudoboson_nogo_defect(dsys, tol), 1e-10));
    rep.add(CheckResult::below("pb_diagonal_theta2_equals_theta1",
                               relative_distance(dsys.theta2, dsys.theta1), 1e-10));
}

inline void suite_riesz_checks(Report& rep, const SuiteConfig& cfg, SplitMix64& gen) {
    const Tolerances& tol = cfg.tol;
    const Matrix t = random_matrix_with_condition(gen, cfg.dim, 50.0);
    const auto basis = build_riesz(t, tol);
    const auto dual = dual_basis(basis, tol);
    rep.add(CheckResult::below("riesz_biorthogonality", dual.biorthogonality_residual,
                               tol.residual_tol));

    const auto resolution = resolution_identity_check(basis, dual, tol);
    rep.add(CheckResult::below("riesz_resolution_left", resolution.left_residual, tol.residual_tol));
    rep.add(CheckResult::below("riesz_resolution_right", resolution.right_residual, tol.residual_tol));

    const auto frame = frame_inequality_check(basis, 100, tol, gen.next_u64());
    rep.add(CheckResult::boolean("riesz_frame_inequality", frame.pass));

    // Frame bounds cross-checked through the inverse frame operator.
    const auto inv_es = eig_hermitian(inverse(basis.frame_op, tol), tol);
    const double cross = std::max(
        std::abs(basis.bound_lower * inv_es.eigenvalues(inv_es.eigenvalues.size() - 1) - 1.0),
        std::abs(basis.bound_upper * inv_es.eigenvalues(0) - 1.0));
    rep.add(CheckResult::below("riesz_bounds_inverse_route", cross, tol.residual_tol));

    const auto dd = build_riesz(basis.t_dual, tol);
    rep.add(CheckResult::below("riesz_dual_involution", relative_distance(dd.t_dual, basis.t),
                               tol.residual_tol));

    const Matrix sinv = inverse(basis.frame_op, tol);
    const auto crit_sinv = biorthogonal_criterion(basis, sinv, tol);
    rep.add(CheckResult::boolean("riesz_criterion_x_sinv",
                                 crit_sinv.x_is_sinv && crit_sinv.f2_biorthogonal &&
                                     crit_sinv.f2_riesz && crit_sinv.equivalent));
    const auto crit_id =
        biorthogonal_criterion(basis, Matrix::Identity(cfg.dim, cfg.dim), tol);
    rep.add(CheckResult::boolean("riesz_criterion_x_identity", crit_id.equivalent));
    const auto crit_2s = biorthogonal_criterion(basis, 2.0 * sinv, tol);
    rep.add(CheckResult::boolean("riesz_criterion_x_2sinv",
                                 !crit_2s.x_is_sinv && !crit_2s.f2_biorthogonal &&
                                     crit_2s.equivalent));

    // Synthesis from a Riesz pair with real eigenvalues is S^-1-pseudo-hermitian.
    std::vector<Complex> eps;
    std::vector<Vector> vecs, duals;
    for (int n = 0; n < cfg.dim; ++n) {
        eps.push_back(Complex(n + gen.uniform(), 0.0));
        vecs.push_back(basis.vector(n));
        duals.push_back(dual.vectors.col(n));
    }
    const Matrix synth = synthesize_from_spectrum(eps, vecs, duals, tol);
    const auto cert = pseudo_hermiticity_check(synth, sinv, tol);
    rep.add(CheckResult::below("riesz_synthesis_pseudo_hermitian", cert.residual,
                               tol.residual_tol * 100.0));
}

inline void suite_lemma_checks(Report& rep, const SuiteConfig& cfg, SplitMix64& gen) {
    const Tolerances& tol = cfg.tol;
    const int d = 8;

    bool lemma1_ok = true;
    for (int inst = 0; inst < 10; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        const int kcount = static_cast<int>(gen.next_u64() % 4);
        std::vector<int> kset;
        while (static_cast<int>(kset.size()) < kcount) {
            const int c = static_cast<int>(gen.next_u64() % d);
            if (std::find(kset.begin(), kset.end(), c) == kset.end()) kset.push_back(c);
        }
        std::sort(kset.begin(), kset.end());
        RealVector sigma(d);
        for (int i = 0; i < d; ++i)
            sigma(i) = std::count(kset.begin(), kset.end(), i) ? 0.0
                                                               : std::exp(gen.uniform(-1.0, 1.0));
        const Matrix x = u * sigma.asDiagonal() * v.adjoint();
        EigenFamily fam;
        for (int n = 0; n < d; ++n) {
            fam.indices.push_back(n);
            fam.vectors.push_back(u.col(n));
            fam.eigenvalues.push_back(Complex(sigma(n) * sigma(n), 0.0));
        }
        const auto rep1 = kernel_equivalence_check(x, fam, tol);
        if (!rep1.equal || rep1.kernel_xdag != kset) lemma1_ok = false;
    }
    rep.add(CheckResult::boolean("lemma1_kernel_triples_agree", lemma1_ok));

    bool lemma3_ok = true;
    for (int inst = 0; inst < 10; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        RealVector sigma(d);
        for (int i = 0; i < d; ++i) sigma(i) = std::exp(gen.uniform(-1.0, 1.0));
        const Matrix x = u * sigma.asDiagonal() * v.adjoint();
        const bool hermitian_case = inst % 2 == 0;
        Vector g(d);
        for (int i = 0; i < d; ++i)
            g(i) = hermitian_case ? Complex(gen.uniform(-2.0, 2.0), 0.0)
                                  : Complex(gen.uniform(-2.0, 2.0), gen.uniform(0.2, 1.0));
        const Matrix theta1 = u * g.asDiagonal() * u.adjoint();
        const auto pair = build_partners(theta1, x, tol);
        const auto sar = selfadjointness_equivalence(pair, tol);
        if (!sar.equivalent || sar.hermitian1 != hermitian_case) lemma3_ok = false;
    }
    rep.add(CheckResult::boolean("lemma3_verdicts_agree", lemma3_ok));

    // No-go proposition on eigenbasis-aligned generators.
    double worst_nogo_dist = 0.0;
    double worst_parallel = 1.0;
    for (int inst = 0; inst < 5; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix lam = random_positive_diagonal(gen, d, 9.0);
        const auto basis = build_riesz(u * lam, tol);
        const Matrix s = basis.frame_op;
        const Matrix theta1 = 0.3 * Matrix::Identity(d, d) + s + 0.2 * (s * s);
        const auto nogo = nogo_check(basis, theta1, tol);
        worst_nogo_dist = std::max(worst_nogo_dist, nogo.theta2_distance);
        worst_parallel = std::min(worst_parallel, nogo.min_parallelism);
    }
    rep.add(CheckResult::below("nogo_theta2_distance", worst_nogo_dist, tol.residual_tol));
    rep.add(CheckResult::below("nogo_parallelism_defect", 1.0 - worst_parallel, tol.residual_tol));

    bool escape = false;
    {
        const Matrix t = random_matrix_with_condition(gen, cfg.dim, 10.0);
        const auto sys = make_pseudoboson(t, tol);
        const auto basis = build_riesz(t, tol);
        try {
            (void)nogo_check(basis, sys.theta1, tol);
        } catch (const HypothesisViolated&) {
            escape = true;
        }
    }
    rep.add(CheckResult::boolean("nogo_pseudoboson_escapes", escape));

    // Commutation suite on a constructed commuting instance.
    {
        const Matrix hpd = random_hpd(gen, d, 16.0);
        const Matrix x = sqrt_positive(hpd, tol);
        const Matrix theta1 = Complex(0.4, 0.9) * hpd + Complex(0.1, -0.3) * (hpd * hpd);
        const auto pair = build_partners(theta1, x, tol);
        const auto cs = verify_commutation_suite(pair, tol);
        rep.add(CheckResult::below("commutation_suite_random_max", cs.max_residual(),
                                   tol.residual_tol));
        rep.add(CheckResult::below("alpha_beta_agreement", alpha_beta_agreement(theta1, x, tol),
                                   tol.residual_tol));
    }

    // Completeness of F2 is equivalent to the invertibility of N2.
    bool completeness_iff = true;
    for (int inst = 0; inst < 6; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        const int rank = d - static_cast<int>(gen.next_u64() % 3);
        RealVector sigma = RealVector::Zero(d);
        for (int i = 0; i < rank; ++i) sigma(i) = std::exp(gen.uniform(-1.0, 1.0));
        const Matrix x = u * sigma.asDiagonal() * v.adjoint();
        EigenFamily fam;
        for (int n = 0; n < d; ++n) {
            fam.indices.push_back(n);
            fam.vectors.push_back(u.col(n));
            fam.eigenvalues.push_back(Complex(sigma(n) * sigma(n), 0.0));
        }
        const auto mapped = map_eigenfamily(x, fam, tol);
        const auto comp = completeness_check(mapped.family, d, tol);
        bool invertible = true;
        try {
            (void)inverse(x.adjoint() * x, tol);
        } catch (const SingularMatrix&) {
            invertible = false;
        }
        if (comp.complete != invertible) completeness_iff = false;
    }
    rep.add(CheckResult::boolean("completeness_iff_n2_invertible", completeness_iff));

    // Multiplicity-one instance: adjoint transport, orthogonality, normality.
    {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        Vector eps(d);
        RealVector sigma(d);
        for (int i = 0; i < d; ++i) {
            eps(i) = Complex(i + gen.uniform(0.1, 0.9), gen.uniform(-1.0, 1.0));
            sigma(i) = std::sqrt(i + 1.0 + gen.uniform(0.0, 0.5));
        }
        const Matrix theta1 = u * eps.asDiagonal() * u.adjoint();
        const Matrix x = u * sigma.asDiagonal() * v.adjoint();
        EigenFamily fam;
        for (int n = 0; n < d; ++n) {
            fam.indices.push_back(n);
            fam.vectors.push_back(u.col(n));
            fam.eigenvalues.push_back(eps(n));
        }
        const auto pair = build_partners(theta1, x, tol);
        const auto mapped = map_eigenfamily(x, fam, tol);

        double adj_res = 0.0;
        const Matrix theta1d = theta1.adjoint();
        const double nth = detail::safe_denom(op_norm(theta1));
        for (int n = 0; n < d; ++n)
            adj_res = std::max(adj_res,
                               (theta1d * u.col(n) - std::conj(eps(n)) * u.col(n)).norm() / nth);
        rep.add(CheckResult::below("prop_adjoint_transport", adj_res, tol.residual_tol));
        rep.add(CheckResult::below("prop_f2_orthogonality",
                                   detail::orthonormality_defect(mapped.family),
                                   tol.residual_tol * 100.0));
        rep.add(CheckResult::below("prop_theta1_normality",
                                   commutation_defect(theta1, theta1.adjoint()),
                                   tol.residual_tol));
        rep.add(CheckResult::below("prop_transport_residual", transport_residual(pair, mapped.family),
                                   tol.residual_tol * 100.0));
        const auto incl = spectral_inclusion_check(pair, mapped.family, tol);
        rep.add(CheckResult::below("prop_spectral_inclusion", incl.max_distance,
                                   std::max(incl.threshold, 1e-8)));
    }

    // Pseudo-hermitian similarity round trip.
    {
        const int dd = 6;
        const Matrix t = random_matrix_with_condition(gen, dd, 8.0);
        RealVector lam(dd);
        for (int i = 0; i < dd; ++i) lam(i) = i + gen.uniform(0.0, 0.4);
        const Matrix theta1 = t * lam.asDiagonal().toDenseMatrix().cast<Complex>() * inverse(t, tol);
        const auto eb = riesz_from_pseudohermitian(theta1, t, tol);
        rep.add(CheckResult::below("pseudo_hermitian_roundtrip_residual", eb.max_eigen_residual,
                                   tol.residual_tol * 100.0));
        RealVector sorted = lam;
        std::sort(sorted.data(), sorted.data() + sorted.size());
        double diff = 0.0;
        for (int i = 0; i < dd; ++i)
            diff = std::max(diff, std::abs(sorted(i) - eb.eigenvalues[static_cast<size_t>(i)]));
        rep.add(CheckResult::below("pseudo_hermitian_roundtrip_spectrum", diff,
                                   tol.residual_tol * 1000.0));
    }
}

/// The full invariant/lemma suite: oscillator (both intertwiner choices),
/// quons in both directions at the configured q, a pseudo-boson instance and
/// a Riesz instance drawn from the seed, and randomized lemma checks.
inline Report run_full_suite(const SuiteConfig& cfg) {
    cfg.tol.validate();
    Report rep;
    rep.command = "verify";
    rep.add_param("dim", cfg.dim);
    rep.add_param("q", cfg.q);
    rep.add_param("seed", static_cast<unsigned long long>(cfg.seed));
    rep.add_param("guard", cfg.tol.guard);
    rep.add_param("rank_tol", cfg.tol.rank_tol);
    rep.add_param("commute_tol", cfg.tol.commute_tol);
    rep.add_param("residual_tol", cfg.tol.residual_tol);
    rep.rng_name = SplitMix64::name();

    SplitMix64 gen(cfg.seed);
    // A pathological tolerance override can trip a library precondition mid
    // section; that counts as a named failing check, not a crash.
    const auto run_section = [&rep](const char* name, auto&& body) {
        try {
            body();
            rep.add(CheckResult::boolean(std::string(name) + "_section_completed", true));
        } catch (const Error&) {
            rep.add(CheckResult::boolean(std::string(name) + "_section_completed", false));
        }
    };
    run_section("oscillator", [&] { suite_oscillator_checks(rep, cfg); });
    run_section("quon", [&] { suite_quon_checks(rep, cfg); });
    run_section("pseudoboson", [&] { suite_pseudoboson_checks(rep, cfg, gen); });
    run_section("riesz", [&] { suite_riesz_checks(rep, cfg, gen); });
    run_section("lemma", [&] { suite_lemma_checks(rep, cfg, gen); });
    return rep;
}

}  // namespace itw
