#pragma once

#include <cstdint>
#include <string>

#include "itw/io.hpp"
#include "itw/models.hpp"
#include "itw/report.hpp"
#include "itw/suite.hpp"

namespace itw {

enum class Subcommand { verify, model, partner };

/// Everything a batch run needs. Exit-code contract: 0 all checks pass,
/// 1 at least one check failed, 2 invalid configuration or input.
struct RunConfig {
    Subcommand subcommand = Subcommand::verify;
    int dim = 12;
    double q = 0.5;
    std::uint64_t seed = 42;
    Tolerances tol;
    std::string format = "json";
    std::string out;  // empty = stdout
    std::string model_name;
    std::string theta1_path;
    std::string x_path;
    std::string theta2_out;

    void validate() const {
        if (dim < 3) throw ConfigError("dim must be at least 3");
        if (dim > 34) throw ConfigError("dim is capped at 34 (floating-point factorials)");
        if (q < 0.0 || q > 1.0) throw ConfigError("q must lie in [0, 1]");
        if (tol.guard < 0 || tol.guard >= dim)
            throw ConfigError("guard must satisfy 0 <= guard < dim");
        try {
            tol.validate();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (format != "json" && format != "csv")
            throw ConfigError("format must be json or csv");
    }
};

struct RunOutcome {
    Report report;
    int exit_code = 0;
};

inline RunOutcome run_verify(const RunConfig& cfg) {
    cfg.validate();
    SuiteConfig scfg;
    scfg.dim = cfg.dim;
    scfg.q = cfg.q;
    scfg.seed = cfg.seed;
    scfg.tol = cfg.tol;
    RunOutcome out;
    out.report = run_full_suite(scfg);
    out.exit_code = out.report.all_pass() ? 0 : 1;
    return out;
}

namespace detail {

inline void model_common_params(Report& rep, const RunConfig& cfg) {
    rep.add_param("dim", cfg.dim);
    rep.add_param("q", cfg.q);
    rep.add_param("seed", static_cast<unsigned long long>(cfg.seed));
    rep.add_param("guard", cfg.tol.guard);
}

inline std::vector<Complex> to_complex_list(const RealVector& v) {
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Complex(v(i), 0.0));
    return out;
}

inline std::vector<Complex> to_complex_list(const Vector& v) {
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

}  // namespace detail

inline RunOutcome run_model(const RunConfig& cfg) {
    cfg.validate();
    const Tolerances& tol = cfg.tol;
    RunOutcome out;
    Report& rep = out.report;
    rep.command = "model";
    rep.model_name = cfg.model_name;
    detail::model_common_params(rep, cfg);

    if (cfg.model_name == "oscillator") {
        const auto sys = make_oscillator(cfg.dim);
        const auto fam1 = ladder_family(sys);
        rep.spectra.emplace_back("h1", detail::to_complex_list(eig_hermitian(sys.h1, tol).eigenvalues));
        rep.value_lists.emplace_back("nu_raise", nu_values(sys.raise, fam1));

        const auto kr = kernel_equivalence_check(sys.raise, fam1, tol);
        rep.index_sets.emplace_back("kernel_raise", kr.kernel_xdag);

        const auto raise_rep = oscillator_partner_expectations(sys, LadderDirection::raise, tol);
        const auto lower_rep = oscillator_partner_expectations(sys, LadderDirection::lower, tol);
        rep.add(CheckResult::below("raise_theta2_closed_form", raise_rep.closed_form_residual,
                                   tol.residual_tol));
        rep.add(CheckResult::below("lower_theta2_closed_form", lower_rep.closed_form_residual,
                                   tol.residual_tol));
        rep.add(CheckResult::boolean("raise_complete_mod_guard",
                                     raise_rep.completeness.complete_mod_guard));
        rep.add(CheckResult::boolean("lower_incomplete",
                                     !lower_rep.completeness.complete_mod_guard));
        rep.add(CheckResult::boolean("kernel_raise_is_ground_state",
                                     kr.equal && kr.kernel_xdag == std::vector<int>{0}));
    } else if (cfg.model_name == "quon") {
        const auto sys = make_quon(cfg.dim, cfg.q);
        rep.spectra.emplace_back("h1", detail::to_complex_list(eig_hermitian(sys.h1, tol).eigenvalues));
        rep.value_lists.emplace_back("eps", sys.eps);
        rep.value_lists.emplace_back("beta", sys.beta);
        rep.value_lists.emplace_back("nu_raise", nu_values(sys.b.adjoint(), quon_family(sys)));

        std::vector<double> spectrum;
        const auto es = eig_hermitian(sys.h1, tol);
        for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) spectrum.push_back(es.eigenvalues(i));
        std::vector<double> eps_sorted = sys.eps;
        std::sort(eps_sorted.begin(), eps_sorted.end());
        rep.add(CheckResult::below("spectrum_closed_form",
                                   detail::max_abs_diff(spectrum, eps_sorted),
                                   tol.residual_tol));

        const auto raise_rep = quon_partner_expectations(sys, LadderDirection::raise, tol);
        rep.add(CheckResult::below("raise_theta2_closed_form", raise_rep.closed_form_residual,
                                   tol.residual_tol));
        rep.add(CheckResult::below("raise_n2_closed_form", raise_rep.n2_closed_form_residual,
                                   tol.residual_tol));
        if (cfg.q > tol.rank_tol) {
            const auto lower_rep = quon_partner_expectations(sys, LadderDirection::lower, tol);
            rep.add(CheckResult::below("lower_theta2_closed_form", lower_rep.closed_form_residual,
                                       tol.residual_tol));
            rep.add(CheckResult::boolean("lower_mode_pseudoinverse",
                                         lower_rep.mode == PartnerMode::beta_pseudoinverse));
        }
    } else if (cfg.model_name == "pseudoboson") {
        SplitMix64 gen(cfg.seed);
        const Matrix t = random_matrix_with_condition(gen, cfg.dim, 10.0);
        const auto basis = build_riesz(t, tol);
        const auto sys = make_pseudoboson(t, tol);
        rep.add_param("condition_number", basis.condition_number);
        rep.set_frame_bounds(basis.bound_lower, basis.bound_upper);
        rep.spectra.emplace_back("theta1",
                                 detail::to_complex_list(eig_general(sys.theta1, tol).eigenvalues));
        const auto verify = pseudoboson_verify(sys, tol);
        for (const auto& [name, value] : verify.residuals)
            rep.add(CheckResult::below(name, value, tol.residual_tol));
        rep.add(CheckResult::above("generic_nogo_defect", pseudoboson_nogo_defect(sys, tol), 1e-3));
    } else {
        throw ConfigError("unknown model: " + cfg.model_name +
                          " (expected oscillator, quon or pseudoboson)");
    }

    out.exit_code = rep.all_pass() ? 0 : 1;
    return out;
}

inline RunOutcome run_partner(const RunConfig& cfg) {
    cfg.validate();
    const Tolerances& tol = cfg.tol;
    const Matrix theta1 = load_matrix(cfg.theta1_path);
    const Matrix x = load_matrix(cfg.x_path);
    if (theta1.rows() != x.rows())
        throw ParseError("partner: theta1 and x have different dimensions");

    RunOutcome out;
    Report& rep = out.report;
    rep.command = "partner";
    rep.add_param("dim", static_cast<int>(theta1.rows()));
    rep.add_param("guard", tol.guard);
    rep.add_param_string("theta1", cfg.theta1_path);
    rep.add_param_string("x", cfg.x_path);

    const auto pair = build_partners(theta1, x, tol);  // CommutatorTooLarge propagates
    rep.add_param_string("mode", to_string(pair.mode));

    const auto general = eig_general(theta1, tol);
    const auto fam1 = family_from_general(general);
    const auto mapped = map_eigenfamily(x, fam1, tol);
    rep.spectra.emplace_back("theta1", detail::to_complex_list(general.eigenvalues));
    rep.spectra.emplace_back("theta2",
                             detail::to_complex_list(eig_general(pair.theta2, tol).eigenvalues));
    rep.index_sets.emplace_back("gamma", mapped.gamma);

    const auto itw = verify_intertwining(pair, tol);
    rep.add(CheckResult::below("intertwine_x_theta2", itw.defect_x_theta2, tol.residual_tol));
    rep.add(CheckResult::below("intertwine_theta2_xdag", itw.defect_theta2_xdag, tol.residual_tol));

    const auto incl = spectral_inclusion_check(pair, mapped.family, tol);
    rep.set_matched_pairs(incl.matches);
    rep.add(CheckResult::below("spectral_inclusion", incl.max_distance, incl.threshold));

    const auto sar = selfadjointness_equivalence(pair, tol);
    rep.add(CheckResult::below("hermiticity_defect_theta1", sar.delta1,
                               sar.hermitian1 ? tol.residual_tol : 2.0));
    rep.add(CheckResult::below("hermiticity_defect_theta2", sar.delta2,
                               sar.hermitian2 ? tol.residual_tol : 2.0));
    rep.add(CheckResult::boolean("selfadjointness_equivalent", sar.equivalent));

    rep.raw_sections.emplace_back("theta2", matrix_to_json(pair.theta2));
    if (!cfg.theta2_out.empty()) atomic_write_file(cfg.theta2_out, matrix_to_json(pair.theta2) + "\n");

    out.exit_code = rep.all_pass() ? 0 : 1;
    return out;
}

inline std::string render_report(const Report& rep, const std::string& format) {
    return format == "csv" ? rep.to_csv() : rep.to_json();
}

}  // namespace itw
