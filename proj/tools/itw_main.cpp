// Batch front-end: instantiate the bundled operator models, run the full
// verification suite, or build a partner operator from user-supplied
// matrices. Exit codes: 0 all checks pass, 1 some check failed, 2 bad input.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <itw/itw.hpp>

namespace {

void add_common_options(CLI::App* cmd, itw::RunConfig& cfg) {
    cmd->add_option("--dim", cfg.dim, "truncation dimension (>= 3)");
    cmd->add_option("--q", cfg.q, "deformation parameter in [0, 1]");
    cmd->add_option("--seed", cfg.seed, "seed for the counter-based generator");
    cmd->add_option("--tol-rank", cfg.tol.rank_tol, "relative singular-value cutoff");
    cmd->add_option("--tol-residual", cfg.tol.residual_tol, "relative residual tolerance");
    cmd->add_option("--tol-commute", cfg.tol.commute_tol, "relative commutator tolerance");
    cmd->add_option("--guard", cfg.tol.guard, "truncation guard band (< dim)");
    cmd->add_option("--format", cfg.format, "report format: json or csv");
    cmd->add_option("--out", cfg.out, "write the report to this path (default stdout)");
}

void emit(const itw::Report& report, const itw::RunConfig& cfg) {
    const std::string text = itw::render_report(report, cfg.format);
    if (cfg.out.empty())
        std::cout << text;
    else
        itw::atomic_write_file(cfg.out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intertwining-operator toolkit"};
    app.require_subcommand(1);

    itw::RunConfig cfg;
    auto* verify = app.add_subcommand("verify", "run the full invariant and lemma suite");
    add_common_options(verify, cfg);

    auto* model = app.add_subcommand("model", "instantiate one model and report its spectra");
    model->add_option("name", cfg.model_name, "oscillator, quon or pseudoboson")->required();
    add_common_options(model, cfg);

    auto* partner = app.add_subcommand("partner", "build a partner operator from matrix files");
    partner->add_option("--theta1", cfg.theta1_path, "matrix JSON file")->required();
    partner->add_option("--x", cfg.x_path, "matrix JSON file")->required();
    partner->add_option("--theta2-out", cfg.theta2_out, "also write theta2 to this path");
    add_common_options(partner, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        itw::RunOutcome outcome;
        if (verify->parsed()) {
            cfg.subcommand = itw::Subcommand::verify;
            outcome = itw::run_verify(cfg);
        } else if (model->parsed()) {
            cfg.subcommand = itw::Subcommand::model;
            outcome = itw::run_model(cfg);
        } else {
            cfg.subcommand = itw::Subcommand::partner;
            outcome = itw::run_partner(cfg);
        }
        emit(outcome.report, cfg);
        if (outcome.exit_code != 0) {
            for (const auto& name : outcome.report.failing_checks())
                std::cerr << "failed: " << name << "\n";
        }
        return outcome.exit_code;
    } catch (const itw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const itw::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const itw::DimensionMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const itw::CommutatorTooLarge& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n"
                  << "commutator defect: " << itw::format_double(e.defect()) << "\n";
        return 1;
    } catch (const itw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
