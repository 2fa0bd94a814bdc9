#include <catch2/catch_amalgamated.hpp>

#include <itw/itw.hpp>

using namespace itw;

namespace {

const Tolerances kTol{};

EigenFamily unitary_family(const Matrix& u, const Vector& eps) {
    EigenFamily fam;
    for (Eigen::Index n = 0; n < u.cols(); ++n) {
        fam.indices.push_back(static_cast<int>(n));
        fam.vectors.push_back(u.col(n));
        fam.eigenvalues.push_back(eps(n));
    }
    return fam;
}

}  // namespace

TEST_CASE("build_partners with the identity intertwiner is trivial") {
    SplitMix64 gen(30);
    const Matrix theta1 = random_hermitian(gen, 6);
    const auto pair = build_partners(theta1, Matrix::Identity(6, 6), kTol);
    REQUIRE(pair.mode == PartnerMode::alpha);
    REQUIRE(op_norm(pair.theta2 - theta1) < 1e-12 * op_norm(theta1));
    REQUIRE(op_norm(pair.n1 - Matrix::Identity(6, 6)) == 0.0);
    REQUIRE(op_norm(pair.n2 - Matrix::Identity(6, 6)) == 0.0);
}

TEST_CASE("build_partners enforces the commutation hypothesis") {
    SplitMix64 gen(31);
    const Matrix theta1 = random_hermitian(gen, 6);
    const Matrix x = random_matrix_with_condition(gen, 6, 5.0);
    REQUIRE_THROWS_AS(build_partners(theta1, x, kTol), CommutatorTooLarge);

    const auto pair = build_partners(theta1, x, kTol, /*allow_commutator_defect=*/true);
    REQUIRE(pair.diagnostics.at("commutator_defect_n1_theta1") > kTol.commute_tol);
}

TEST_CASE("oscillator raise produces h1 + 1 through the pseudo-inverse route") {
    const int d = 12;
    const auto sys = make_oscillator(d);
    const auto pair = build_partners(sys.h1, sys.raise, kTol);
    REQUIRE(pair.mode == PartnerMode::beta_pseudoinverse);  // truncation kills the top level
    const Matrix expect = sys.h1 + Matrix::Identity(d, d);
    REQUIRE(block_norm(pair.theta2 - expect, d - kTol.guard) < 1e-10);
}

TEST_CASE("oscillator lower produces h1 - 1 on the transported span") {
    const int d = 12;
    const auto sys = make_oscillator(d);
    const auto pair = build_partners(sys.h1, sys.lower, kTol);
    REQUIRE(pair.mode == PartnerMode::beta_pseudoinverse);
    const auto mapped = map_eigenfamily(sys.lower, ladder_family(sys), kTol);
    const Matrix q = orthonormal_span(mapped.family.column_matrix(), kTol);
    const Matrix p = q * q.adjoint();
    const Matrix expect = sys.h1 - Matrix::Identity(d, d);
    REQUIRE(op_norm((pair.theta2 - expect) * p) < 1e-9);
}

TEST_CASE("quon raise matches q h1 + 1") {
    const auto sys = make_quon(12, 0.5);
    const auto pair = build_partners(sys.h1, sys.b.adjoint(), kTol);
    const Matrix expect = 0.5 * sys.h1 + Matrix::Identity(12, 12);
    REQUIRE(block_norm(pair.theta2 - expect, 12 - kTol.guard) < 1e-10);
}

TEST_CASE("map_eigenfamily drops exactly the annihilated indices") {
    const int d = 10;
    const auto sys = make_oscillator(d);
    const auto fam1 = ladder_family(sys);

    const auto raised = map_eigenfamily(sys.raise, fam1, kTol);  // x† = a kills e_0
    REQUIRE(raised.gamma == std::vector<int>{0});
    REQUIRE(raised.family.indices.front() == 1);
    REQUIRE(raised.family.size() == d - 1);

    const auto ident = map_eigenfamily(Matrix::Identity(d, d), fam1, kTol);
    REQUIRE(ident.gamma.empty());
    REQUIRE(ident.family.size() == d);
    for (int k = 0; k < d; ++k)
        REQUIRE((ident.family.vectors[k] - fam1.vectors[k]).norm() == 0.0);
}

TEST_CASE("quon transport reproduces the beta-scaled shift") {
    const auto sys = make_quon(10, 0.5);
    const auto mapped = map_eigenfamily(sys.b.adjoint(), quon_family(sys), kTol);
    // x = B†, so x† phi_n = B phi_n = beta_{n-1} phi_{n-1} for n >= 1.
    for (int k = 0; k < mapped.family.size(); ++k) {
        const int n = mapped.family.indices[k];
        const Vector expect = sys.beta[n - 1] * Vector::Unit(10, n - 1);
        REQUIRE((mapped.family.vectors[k] - expect).norm() < 1e-14);
    }
}

TEST_CASE("recover_family1 reverses the transport") {
    const int d = 10;
    const auto sys = make_oscillator(d);
    const auto fam1 = ladder_family(sys);
    const auto mapped = map_eigenfamily(sys.raise, fam1, kTol);
    const auto rec = recover_family1(sys.raise, mapped.family, kTol);
    for (int k = 0; k < rec.size(); ++k) {
        const int n = rec.indices[k];
        REQUIRE((rec.vectors[k] - fam1.vectors[n]).norm() < 1e-12);
    }

    const auto quon = make_quon(10, 0.7);
    const auto qmapped = map_eigenfamily(quon.b.adjoint(), quon_family(quon), kTol);
    const auto qrec = recover_family1(quon.b.adjoint(), qmapped.family, kTol);
    for (int k = 0; k < qrec.size(); ++k) {
        const int n = qrec.indices[k];
        REQUIRE((qrec.vectors[k] - Vector::Unit(10, n)).norm() < 1e-10);
    }
}

TEST_CASE("recover_family1 flags annihilated vectors") {
    EigenFamily fam2;
    fam2.indices = {0};
    fam2.vectors = {Vector::Unit(3, 0)};
    fam2.eigenvalues = {Complex(1, 0)};
    Matrix x = Matrix::Zero(3, 3);
    x(1, 1) = x(2, 2) = 1.0;
    REQUIRE_THROWS_AS(recover_family1(x, fam2, kTol), ZeroVector);
}

TEST_CASE("nu values from the matrix action") {
    const int d = 10;
    const auto sys = make_oscillator(d);
    const auto fam1 = ladder_family(sys);

    // Oracle: nu_n = ||a e_n||^2 with x = a†, computed entry by entry.
    const auto nu = nu_values(sys.raise, fam1);
    for (int n = 0; n < d; ++n) {
        const double expect = (sys.lower * Vector::Unit(d, n)).squaredNorm();
        REQUIRE(nu[n] == Catch::Approx(expect).margin(1e-13));
        REQUIRE(nu[n] == Catch::Approx(static_cast<double>(n)).margin(1e-12));
    }

    const auto nu_id = nu_values(Matrix::Identity(d, d), fam1);
    for (double v : nu_id) REQUIRE(v == Catch::Approx(1.0));

    const auto quon = make_quon(10, 0.5);
    const auto qnu = nu_values(quon.b.adjoint(), quon_family(quon));
    REQUIRE(qnu[0] == Catch::Approx(0.0).margin(1e-15));
    for (int n = 1; n < 10; ++n) REQUIRE(qnu[n] == Catch::Approx(quon.eps[n]).margin(1e-13));
}

TEST_CASE("kernel equivalence triple") {
    const auto sys = make_oscillator(8);
    const auto fam1 = ladder_family(sys);
    const auto rep = kernel_equivalence_check(sys.raise, fam1, kTol);
    REQUIRE(rep.equal);
    REQUIRE(rep.kernel_xdag == std::vector<int>{0});

    SplitMix64 gen(32);
    const Matrix x = random_matrix_with_condition(gen, 8, 10.0);
    EigenFamily fam = unitary_family(random_unitary(gen, 8), Vector::Ones(8));
    const auto rep2 = kernel_equivalence_check(x, fam, kTol);
    REQUIRE(rep2.equal);
    REQUIRE(rep2.kernel_xdag.empty());
}

TEST_CASE("kernel equivalence with a prescribed two-dimensional nullspace") {
    SplitMix64 gen(33);
    const int d = 8;
    const Matrix u = random_unitary(gen, d);
    const Matrix v = random_unitary(gen, d);
    RealVector sigma(d);
    for (int i = 0; i < d; ++i) sigma(i) = (i == 3 || i == 5) ? 0.0 : 1.0 + gen.uniform();
    const Matrix x = u * sigma.asDiagonal() * v.adjoint();
    Vector nus(d);
    for (int i = 0; i < d; ++i) nus(i) = sigma(i) * sigma(i);
    const auto fam = unitary_family(u, nus);
    const auto rep = kernel_equivalence_check(x, fam, kTol);
    REQUIRE(rep.equal);
    REQUIRE(rep.kernel_xdag == std::vector<int>{3, 5});
}

TEST_CASE("intertwining relations hold for the ladder models") {
    const auto sys = make_oscillator(12);
    for (const Matrix& x : {sys.raise, sys.lower}) {
        const auto pair = build_partners(sys.h1, x, kTol);
        const auto rep = verify_intertwining(pair, kTol);
        REQUIRE(rep.projected);
        REQUIRE(rep.defect_x_theta2 < 1e-10);
        REQUIRE(rep.defect_theta2_xdag < 1e-10);
        REQUIRE(rep.pass);
    }

    SplitMix64 gen(34);
    const Matrix theta1 = random_hermitian(gen, 6);
    const auto pair = build_partners(theta1, Matrix::Identity(6, 6), kTol);
    const auto rep = verify_intertwining(pair, kTol);
    REQUIRE(rep.defect_x_theta2 == 0.0);
    REQUIRE(rep.defect_theta2_xdag == 0.0);
}

TEST_CASE("commutation suite vanishes on constructed commuting instances") {
    const auto quon = make_quon(10, 0.5);
    const auto qpair = build_partners(quon.h1, quon.b.adjoint(), kTol);
    const auto qrep = verify_commutation_suite(qpair, kTol);
    REQUIRE(qrep.used_pseudo_inverse);
    REQUIRE(qrep.max_residual() < 1e-9);

    SplitMix64 gen(35);
    const Matrix hpd = random_hpd(gen, 8, 9.0);
    const Matrix x = sqrt_positive(hpd, kTol);
    const Matrix theta1 = Complex(1.0, 0.5) * hpd + Complex(-0.2, 0.1) * (hpd * hpd);
    const auto pair = build_partners(theta1, x, kTol);
    const auto rep = verify_commutation_suite(pair, kTol);
    REQUIRE_FALSE(rep.used_pseudo_inverse);
    REQUIRE(rep.residuals.size() == 9);
    REQUIRE(rep.max_residual() < 1e-9);
}

TEST_CASE("selfadjointness verdicts agree across the partner pair") {
    SplitMix64 gen(36);
    const Matrix u = random_unitary(gen, 8);
    const Matrix v = random_unitary(gen, 8);
    RealVector sigma(8);
    for (int i = 0; i < 8; ++i) sigma(i) = std::exp(gen.uniform(-0.5, 0.5));
    const Matrix x = u * sigma.asDiagonal() * v.adjoint();

    Vector greal(8), gcplx(8);
    for (int i = 0; i < 8; ++i) {
        greal(i) = Complex(gen.uniform(-2.0, 2.0), 0.0);
        gcplx(i) = Complex(gen.uniform(-2.0, 2.0), gen.uniform(0.3, 1.0));
    }

    const auto hermitian_pair = build_partners(u * greal.asDiagonal() * u.adjoint(), x, kTol);
    const auto h = selfadjointness_equivalence(hermitian_pair, kTol);
    REQUIRE(h.hermitian1);
    REQUIRE(h.hermitian2);
    REQUIRE(h.equivalent);

    const auto general_pair = build_partners(u * gcplx.asDiagonal() * u.adjoint(), x, kTol);
    const auto g = selfadjointness_equivalence(general_pair, kTol);
    REQUIRE_FALSE(g.hermitian1);
    REQUIRE_FALSE(g.hermitian2);
    REQUIRE(g.equivalent);
    REQUIRE(g.delta1 > 0.01);
    REQUIRE(g.delta2 > 0.01);
}

TEST_CASE("spectral inclusion across modes") {
    const auto sys = make_oscillator(12);
    const auto pair = build_partners(sys.h1, sys.lower, kTol);
    const auto mapped = map_eigenfamily(sys.lower, ladder_family(sys), kTol);
    const auto rep = spectral_inclusion_check(pair, mapped.family, kTol);
    REQUIRE(rep.restricted);
    REQUIRE(rep.pass);

    SplitMix64 gen(37);
    const Matrix u = random_unitary(gen, 8);
    const Matrix v = random_unitary(gen, 8);
    Vector eps(8);
    RealVector sigma(8);
    for (int i = 0; i < 8; ++i) {
        eps(i) = Complex(i + 0.25, gen.uniform(-1.0, 1.0));
        sigma(i) = std::exp(gen.uniform(-0.5, 0.5));
    }
    const Matrix theta1 = u * eps.asDiagonal() * u.adjoint();
    const Matrix x = u * sigma.asDiagonal() * v.adjoint();
    const auto cpair = build_partners(theta1, x, kTol);
    const auto cmapped = map_eigenfamily(x, unitary_family(u, eps), kTol);
    const auto crep = spectral_inclusion_check(cpair, cmapped.family, kTol);
    REQUIRE_FALSE(crep.restricted);
    REQUIRE(crep.max_distance < 1e-8);
    REQUIRE(crep.matches.size() == 8);
}

TEST_CASE("transported vectors are eigenvectors of theta2") {
    const auto sys = make_quon(12, 0.7);
    for (const Matrix& x : {Matrix(sys.b.adjoint()), sys.b}) {
        const auto pair = build_partners(sys.h1, x, kTol);
        const auto mapped = map_eigenfamily(x, quon_family(sys), kTol);
        REQUIRE(transport_residual(pair, mapped.family) < 1e-10);
    }
}

TEST_CASE("alpha and beta constructions coincide for invertible intertwiners") {
    SplitMix64 gen(38);
    const Matrix hpd = random_hpd(gen, 7, 12.0);
    const Matrix x = sqrt_positive(hpd, kTol);
    const Matrix theta1 = Complex(0.7, 0.1) * hpd + 0.4 * (hpd * hpd);
    REQUIRE(alpha_beta_agreement(theta1, x, kTol) < 1e-9);
}

TEST_CASE("spectral synthesis") {
    const Matrix m = synthesize_from_spectrum({Complex(1, 0), Complex(2, 0)},
                                              {Vector::Unit(2, 0), Vector::Unit(2, 1)},
                                              {Vector::Unit(2, 0), Vector::Unit(2, 1)});
    REQUIRE(op_norm(m - (Matrix(2, 2) << 1, 0, 0, 2).finished()) < 1e-15);

    const auto sys = make_oscillator(10);
    std::vector<Complex> eps;
    std::vector<Vector> vecs;
    for (int n = 0; n < 10; ++n) {
        eps.push_back(Complex(n, 0));
        vecs.push_back(Vector::Unit(10, n));
    }
    REQUIRE(op_norm(synthesize_from_spectrum(eps, vecs, vecs) - sys.h1) < 1e-12);

    // Non-biorthogonal duals are rejected.
    std::vector<Vector> bad = vecs;
    bad[0] *= 2.0;
    REQUIRE_THROWS_AS(synthesize_from_spectrum(eps, vecs, bad), BiorthogonalityViolated);
}

TEST_CASE("completeness check follows the numerical rank") {
    const int d = 10;
    const auto sys = make_oscillator(d);
    const auto fam1 = ladder_family(sys);
    REQUIRE(completeness_check(fam1, d, kTol).complete);

    const auto raised = map_eigenfamily(sys.raise, fam1, kTol);
    const auto comp = completeness_check(raised.family, d, kTol);
    REQUIRE(comp.rank == d - 1);   // the top level is lost to truncation
    REQUIRE_FALSE(comp.complete);

    // With the guard directions granted, the raise family is complete while
    // the lower family stays one short (the genuinely missing ground state).
    const auto graise = guarded_completeness(raised.family, d, kTol.guard, kTol);
    REQUIRE(graise.effective_rank == d);
    REQUIRE(graise.complete_mod_guard);

    const auto lowered = map_eigenfamily(sys.lower, fam1, kTol);
    const auto glower = guarded_completeness(lowered.family, d, kTol.guard, kTol);
    REQUIRE(glower.rank == d - 1);
    REQUIRE(glower.effective_rank == d - 1);
    REQUIRE_FALSE(glower.complete_mod_guard);
}

TEST_CASE("completeness is equivalent to invertibility of n2") {
    SplitMix64 gen(39);
    const int d = 8;
    for (int rank_drop = 0; rank_drop <= 2; ++rank_drop) {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        RealVector sigma = RealVector::Zero(d);
        for (int i = 0; i < d - rank_drop; ++i) sigma(i) = std::exp(gen.uniform(-0.5, 0.5));
        const Matrix x = u * sigma.asDiagonal() * v.adjoint();
        Vector nus(d);
        for (int i = 0; i < d; ++i) nus(i) = sigma(i) * sigma(i);
        const auto mapped = map_eigenfamily(x, unitary_family(u, nus), kTol);
        const auto comp = completeness_check(mapped.family, d, kTol);
        bool invertible = true;
        try {
            (void)inverse(x.adjoint() * x, kTol);
        } catch (const SingularMatrix&) {
            invertible = false;
        }
        REQUIRE(comp.complete == invertible);
        REQUIRE(comp.complete == (rank_drop == 0));
    }
}

TEST_CASE("n2 decomposes over the transported projectors") {
    const auto sys = make_oscillator(12);
    const auto pair = build_partners(sys.h1, sys.raise, kTol);
    const auto mapped = map_eigenfamily(sys.raise, ladder_family(sys), kTol);
    const auto rep = corollary_n2_decomposition(mapped.family, pair.n2, kTol);
    REQUIRE(rep.residual_plain < 1e-9);
    REQUIRE(rep.residual_weighted < 1e-9);

    const auto quon = make_quon(10, 0.3);
    const auto qpair = build_partners(quon.h1, quon.b.adjoint(), kTol);
    const auto qmapped = map_eigenfamily(quon.b.adjoint(), quon_family(quon), kTol);
    const auto qrep = corollary_n2_decomposition(qmapped.family, qpair.n2, kTol);
    REQUIRE(qrep.residual_plain < 1e-9);
    REQUIRE(qrep.residual_weighted < 1e-9);

    // One-dimensional family: both sums are exact.
    EigenFamily single;
    single.indices = {0};
    single.vectors = {std::sqrt(2.0) * Vector::Unit(1, 0)};
    single.eigenvalues = {Complex(1, 0)};
    Matrix n2(1, 1);
    n2 << 2.0;
    const auto srep = corollary_n2_decomposition(single, n2, kTol);
    REQUIRE(srep.residual_plain < 1e-15);
    REQUIRE(srep.residual_weighted < 1e-15);
}

TEST_CASE("degenerate nu aborts the decomposition") {
    EigenFamily fam;
    fam.indices = {0, 1};
    fam.vectors = {Vector::Unit(2, 0), Vector::Unit(2, 1)};
    fam.eigenvalues = {Complex(1, 0), Complex(1, 0)};
    REQUIRE_THROWS_AS(corollary_n2_decomposition(fam, Matrix::Identity(2, 2), kTol),
                      DegenerateNu);
}

TEST_CASE("multiplicity-one proposition: adjoint eigenvalues and orthogonality") {
    SplitMix64 gen(40);
    const int d = 8;
    const Matrix u = random_unitary(gen, d);
    const Matrix v = random_unitary(gen, d);
    Vector eps(d);
    RealVector sigma(d);
    for (int i = 0; i < d; ++i) {
        eps(i) = Complex(0.5 * i + 0.1, gen.uniform(-1.0, 1.0));
        sigma(i) = std::sqrt(i + 1.0);
    }
    const Matrix theta1 = u * eps.asDiagonal() * u.adjoint();
    const Matrix x = u * sigma.asDiagonal() * v.adjoint();
    const auto pair = build_partners(theta1, x, kTol);
    const auto mapped = map_eigenfamily(x, unitary_family(u, eps), kTol);

    // N2 phi^(2) = nu phi^(2), with distinct nu the family is orthogonal.
    for (int k = 0; k < mapped.family.size(); ++k) {
        const Vector& w = mapped.family.vectors[k];
        const double nu = mapped.family.nu[k];
        REQUIRE((pair.n2 * w - nu * w).norm() < 1e-12 * op_norm(pair.n2));
        REQUIRE_FALSE(mapped.family.multiplicity_flags[k]);
    }
    for (int i = 0; i < mapped.family.size(); ++i)
        for (int j = i + 1; j < mapped.family.size(); ++j)
            REQUIRE(std::abs(mapped.family.vectors[i].dot(mapped.family.vectors[j])) < 1e-12);

    // Theta1† keeps the family with conjugated eigenvalues; normality follows
    // from a complete multiplicity-one family, on both sides of the pair.
    for (int n = 0; n < d; ++n)
        REQUIRE((theta1.adjoint() * u.col(n) - std::conj(eps(n)) * u.col(n)).norm() <
                1e-12 * op_norm(theta1));
    REQUIRE(commutation_defect(theta1, theta1.adjoint()) < 1e-12);
    REQUIRE(commutation_defect(pair.theta2, pair.theta2.adjoint()) < 1e-12);
    for (int k = 0; k < mapped.family.size(); ++k) {
        const Vector& w = mapped.family.vectors[k];
        const Complex e = mapped.family.eigenvalues[k];
        REQUIRE((pair.theta2.adjoint() * w - std::conj(e) * w).norm() <
                1e-11 * op_norm(pair.theta2) * w.norm());
    }
}

TEST_CASE("projector family") {
    SplitMix64 gen(41);
    Vector phi(5);
    for (int i = 0; i < 5; ++i) phi(i) = gen.cnormal();
    phi *= 2.0 / phi.norm();  // norm 2, so nu = 4 and P is not idempotent

    const Matrix p = projector(phi);
    const Matrix phat = normalized_projector(phi);
    REQUIRE(op_norm(phat * phat - phat) < 1e-13);
    REQUIRE(op_norm(phat.adjoint() - phat) < 1e-14);
    REQUIRE(op_norm(p * p - p) > 1.0);  // fails idempotence when nu != 1

    Vector psi(5);
    for (int i = 0; i < 5; ++i) psi(i) = gen.cnormal();
    const Matrix pnm = rank_one_map(phi, psi);
    Vector f(5);
    for (int i = 0; i < 5; ++i) f(i) = gen.cnormal();
    REQUIRE((pnm * f - phi.dot(f) * psi).norm() < 1e-13);
}
