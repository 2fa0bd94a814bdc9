// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// criteria hold. Criterion 9 drives the installed CLI binary (path passed
// via --cli).

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <itw/itw.hpp>

using namespace itw;

namespace {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) { return format_double(v); }

// --- 1. oscillator raise: theta2 = h1 + 1, complete family, invertible N2 ---
Criterion criterion1() {
    Criterion c{"criterion-1 oscillator raise d=16"};
    const int d = 16;
    Tolerances tol;  // guard = 2
    const auto sys = make_oscillator(d);
    const auto pair = build_partners(sys.h1, sys.raise, tol);
    const Matrix expect = sys.h1 + Matrix::Identity(d, d);
    const double block_res = block_norm(pair.theta2 - expect, d - tol.guard);

    const auto mapped = map_eigenfamily(sys.raise, ladder_family(sys), tol);
    const auto comp = guarded_completeness(mapped.family, d, tol.guard, tol);
    const bool n2_invertible = invertible_mod_guard(pair.n2, tol.guard, tol);

    c.pass = block_res <= 1e-10 && comp.effective_rank == 16 && n2_invertible;
    c.detail = "block residual " + fmt(block_res) + ", rank " + std::to_string(comp.rank) +
               " (effective " + std::to_string(comp.effective_rank) + "), N2 invertible mod guard " +
               (n2_invertible ? "yes" : "no");
    return c;
}

// --- 2. oscillator lower: singular N2, rank 15, theta2 = h1 - 1 on span ---
Criterion criterion2() {
    Criterion c{"criterion-2 oscillator lower d=16"};
    const int d = 16;
    Tolerances tol;
    const auto sys = make_oscillator(d);
    const auto pair = build_partners(sys.h1, sys.lower, tol);
    const bool flagged = pair.mode == PartnerMode::beta_pseudoinverse &&
                         !invertible_mod_guard(pair.n2, tol.guard, tol);

    const auto mapped = map_eigenfamily(sys.lower, ladder_family(sys), tol);
    const auto comp = completeness_check(mapped.family, d, tol);

    Matrix p = Matrix::Zero(d, d);
    for (int n = 1; n <= 13; ++n) p(n, n) = 1.0;
    const Matrix expect = sys.h1 - Matrix::Identity(d, d);
    const double span_res = op_norm((pair.theta2 - expect) * p);

    c.pass = flagged && comp.rank == 15 && span_res <= 1e-9;
    c.detail = "span residual " + fmt(span_res) + ", rank " + std::to_string(comp.rank) +
               ", N2 flagged singular " + (flagged ? "yes" : "no");
    return c;
}

// --- 3. quon spectra and both closed forms at q in {0.3, 0.7} ---
Criterion criterion3() {
    Criterion c{"criterion-3 quon closed forms d=16"};
    const int d = 16;
    Tolerances tol;
    bool ok = true;
    std::ostringstream detail;
    for (double q : {0.3, 0.7}) {
        const auto sys = make_quon(d, q);
        const auto es = eig_hermitian(sys.h1, tol);
        double spec_diff = 0.0;
        for (int n = 0; n < d - tol.guard; ++n) {
            const double closed = (1.0 - std::pow(q, n)) / (1.0 - q);
            spec_diff = std::max(spec_diff, std::abs(es.eigenvalues(n) - closed));
        }

        const auto raise_pair = build_partners(sys.h1, sys.b.adjoint(), tol);
        const Matrix raise_expect = q * sys.h1 + Matrix::Identity(d, d);
        const double raise_res = block_norm(raise_pair.theta2 - raise_expect, d - tol.guard);

        const auto lower_pair = build_partners(sys.h1, sys.b, tol);
        const auto mapped = map_eigenfamily(sys.b, quon_family(sys), tol);
        const Matrix span = orthonormal_span(mapped.family.column_matrix(), tol);
        const Matrix proj = span * span.adjoint();
        const Matrix lower_expect = (sys.h1 - Matrix::Identity(d, d)) / q;
        const double lower_res = op_norm((lower_pair.theta2 - lower_expect) * proj);

        ok = ok && spec_diff <= 1e-9 && raise_res <= 1e-10 && lower_res <= 1e-9;
        detail << "q=" << q << ": spectrum " << fmt(spec_diff) << ", raise " << fmt(raise_res)
               << ", lower " << fmt(lower_res) << "; ";
    }
    c.pass = ok;
    c.detail = detail.str();
    return c;
}

// --- 4. Riesz machinery on 100 random generators ---
Criterion criterion4() {
    Criterion c{"criterion-4 riesz suite 100 x d=10"};
    Tolerances tol;
    SplitMix64 gen(401);
    double worst_biorth = 0.0, worst_bounds = 0.0, worst_resolution = 0.0;
    bool frames_ok = true;
    for (int inst = 0; inst < 100; ++inst) {
        const Matrix t = random_matrix_with_condition(gen, 10, 50.0);
        const auto basis = build_riesz(t, tol);
        const auto dual = dual_basis(basis, tol);
        worst_biorth = std::max(worst_biorth, dual.biorthogonality_residual);

        const auto es = eig_hermitian(Matrix(t * t.adjoint()), tol);
        worst_bounds = std::max(worst_bounds,
                                std::max(std::abs(basis.bound_lower - es.eigenvalues(0)),
                                         std::abs(basis.bound_upper -
                                                  es.eigenvalues(es.eigenvalues.size() - 1))));

        const auto res = resolution_identity_check(basis, dual, tol);
        worst_resolution = std::max(worst_resolution, std::max(res.left_residual, res.right_residual));

        if (inst % 10 == 0)
            frames_ok = frames_ok && frame_inequality_check(basis, 100, tol, gen.next_u64()).pass;
    }
    c.pass = worst_biorth <= 1e-8 && worst_bounds <= 1e-10 && worst_resolution <= 1e-8 && frames_ok;
    c.detail = "biorthogonality " + fmt(worst_biorth) + ", bounds " + fmt(worst_bounds) +
               ", resolutions " + fmt(worst_resolution);
    return c;
}

// --- 5. Lemma 1 on 50 instances with prescribed kernels ---
Criterion criterion5() {
    Criterion c{"criterion-5 lemma1 kernels 50 x d=8"};
    Tolerances tol;
    SplitMix64 gen(501);
    const int d = 8;
    bool ok = true;
    for (int inst = 0; inst < 50; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix v = random_unitary(gen, d);
        std::vector<int> kset;
        const int kcount = static_cast<int>(gen.next_u64() % 4);
        while (static_cast<int>(kset.size()) < kcount) {
            const int cand = static_cast<int>(gen.next_u64() % d);
            if (std::find(kset.begin(), kset.end(), cand) == kset.end()) kset.push_back(cand);
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
        const auto rep = kernel_equivalence_check(x, fam, tol);
        if (!rep.equal || rep.kernel_xdag != kset) ok = false;
    }
    c.pass = ok;
    c.detail = ok ? "all three index sets coincide in every instance" : "set mismatch";
    return c;
}

// --- 6. Lemma 3 on 50 commuting instances with invertible N2 ---
Criterion criterion6() {
    Criterion c{"criterion-6 lemma3 verdicts 50 x d=8"};
    Tolerances tol;  // residual_tol = 1e-9 is the verdict tolerance
    SplitMix64 gen(601);
    const int d = 8;
    bool ok = true;
    for (int inst = 0; inst < 50; ++inst) {
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
        const auto rep = selfadjointness_equivalence(pair, tol);
        if (!rep.equivalent || rep.hermitian1 != hermitian_case || !rep.n2_invertible) ok = false;
    }
    c.pass = ok;
    c.detail = ok ? "hermiticity verdicts agree in every instance" : "verdict disagreement";
    return c;
}

// --- 7. no-go proposition on 25 instances theta1 = g(S) ---
Criterion criterion7() {
    Criterion c{"criterion-7 no-go 25 x d=8"};
    Tolerances tol;
    SplitMix64 gen(701);
    const int d = 8;
    double worst_dist = 0.0;
    double worst_parallel = 1.0;
    for (int inst = 0; inst < 25; ++inst) {
        const Matrix u = random_unitary(gen, d);
        const Matrix lam = random_positive_diagonal(gen, d, 9.0);
        const auto basis = build_riesz(u * lam, tol);
        const Matrix s = basis.frame_op;
        // Monotone polynomial keeps the eigenvalues of theta1 distinct.
        const Matrix theta1 = 0.3 * Matrix::Identity(d, d) + s + 0.2 * (s * s);
        const auto rep = nogo_check(basis, theta1, tol);
        worst_dist = std::max(worst_dist, rep.theta2_distance);
        worst_parallel = std::min(worst_parallel, rep.min_parallelism);
    }
    c.pass = worst_dist <= 1e-9 && worst_parallel >= 1.0 - 1e-9;
    c.detail = "worst ||theta2 - theta1|| " + fmt(worst_dist) + ", worst parallelism " +
               fmt(worst_parallel);
    return c;
}

// --- 8. pseudo-boson systems: 25 random + diagonal generators ---
Criterion criterion8() {
    Criterion c{"criterion-8 pseudo-boson 25 x d=12"};
    Tolerances tol;
    SplitMix64 gen(801);
    const int d = 12;
    double worst_ab = 0.0, worst_adjoint = 0.0, worst_io = 0.0, worst_ph = 0.0, worst_int = 0.0;
    double min_generic_defect = 1e300;
    bool ok = true;
    for (int inst = 0; inst < 25; ++inst) {
        const Matrix t = random_matrix_with_condition(gen, d, 10.0);
        const auto sys = make_pseudoboson(t, tol);
        const auto rep = pseudoboson_verify(sys, tol);
        worst_ab = std::max(worst_ab, rep.residuals.at("ab_commutator_block"));
        worst_adjoint = std::max(worst_adjoint, rep.residuals.at("theta2_adjoint"));
        worst_io = std::max(worst_io, rep.residuals.at("intertwine_s"));
        worst_ph = std::max(worst_ph, rep.residuals.at("pseudo_hermiticity"));

        const auto spec = eig_general(sys.theta1, tol);
        for (int n = 0; n < 10; ++n) {
            double best = 1e300;
            for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
                best = std::min(best, std::abs(spec.eigenvalues(i) - Complex(n, 0)));
            worst_int = std::max(worst_int, best);
        }
        min_generic_defect = std::min(min_generic_defect, pseudoboson_nogo_defect(sys, tol));
    }
    ok = worst_ab <= 1e-8 && worst_adjoint <= 1e-10 && worst_io <= 1e-8 && worst_ph <= 1e-8 &&
         worst_int <= 1e-7 && min_generic_defect > 1e-3;

    double worst_diag_defect = 0.0, worst_diag_dist = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        const Matrix td = random_positive_diagonal(gen, d, 6.0);
        const auto dsys = make_pseudoboson(td, tol);
        worst_diag_defect = std::max(worst_diag_defect, pseudoboson_nogo_defect(dsys, tol));
        worst_diag_dist =
            std::max(worst_diag_dist, relative_distance(dsys.theta2, dsys.theta1));
    }
    ok = ok && worst_diag_defect <= 1e-10 && worst_diag_dist <= 1e-10;

    c.pass = ok;
    c.detail = "ab " + fmt(worst_ab) + ", adjoint " + fmt(worst_adjoint) + ", thetaS " +
               fmt(worst_io) + ", pseudo-hermiticity " + fmt(worst_ph) + ", spectrum " +
               fmt(worst_int) + ", generic defect >= " + fmt(min_generic_defect) +
               ", diagonal defect " + fmt(worst_diag_defect);
    return c;
}

int run_cli(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

// --- 9. CLI determinism and exit-code contract ---
Criterion criterion9(const std::string& cli) {
    Criterion c{"criterion-9 cli determinism + exit codes"};
    if (cli.empty()) {
        c.detail = "no --cli path provided";
        return c;
    }
    namespace fs = std::filesystem;
    const fs::path dir = fs::current_path() / "acceptance_tmp";
    fs::create_directories(dir);
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();

    const int ec_a = run_cli(cli + " verify --dim 12 --seed 42 --out " + a + " > /dev/null 2>&1");
    const int ec_b = run_cli(cli + " verify --dim 12 --seed 42 --out " + b + " > /dev/null 2>&1");
    const bool deterministic = ec_a == 0 && ec_b == 0 && read_file(a) == read_file(b);

    const int ec_fail =
        run_cli(cli + " verify --dim 10 --tol-residual 1e-16 > /dev/null 2>&1");
    const int ec_config = run_cli(cli + " verify --dim 2 > /dev/null 2>&1");

    const std::string bad = (dir / "bad.json").string();
    atomic_write_file(bad, "{\"dim\": oops");
    const std::string ident = (dir / "ident.json").string();
    atomic_write_file(ident, matrix_to_json(Matrix::Identity(3, 3)));
    const int ec_parse =
        run_cli(cli + " partner --theta1 " + bad + " --x " + ident + " > /dev/null 2>&1");

    c.pass = deterministic && ec_fail == 1 && ec_config == 2 && ec_parse == 2;
    c.detail = std::string("byte-identical ") + (deterministic ? "yes" : "no") +
               ", forced failure exit " + std::to_string(ec_fail) + ", config error exit " +
               std::to_string(ec_config) + ", parse error exit " + std::to_string(ec_parse);
    fs::remove_all(dir);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    std::vector<Criterion> results;
    results.push_back(criterion1());
    results.push_back(criterion2());
    results.push_back(criterion3());
    results.push_back(criterion4());
    results.push_back(criterion5());
    results.push_back(criterion6());
    results.push_back(criterion7());
    results.push_back(criterion8());
    results.push_back(criterion9(cli));

    bool all = true;
    for (const auto& c : results) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << c.detail << "]\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}
