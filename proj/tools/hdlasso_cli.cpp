#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <string>

#include "hdlasso/errors.hpp"
#include "hdlasso/experiments.hpp"

using hdlasso::ExperimentConfig;

namespace {

struct CliState {
    ExperimentConfig cfg;
    std::string config_path;
    std::string estimator = "lasso";
    std::string sigma_source = "scaled-tilde";
};

void add_common_options(CLI::App* sub, CliState& st) {
    sub->add_option("--config", st.config_path, "JSON config file; flags override its fields");
    sub->add_option("--n", st.cfg.n, "number of observations");
    sub->add_option("--p", st.cfg.p, "number of coefficients");
    sub->add_option("--s0", st.cfg.s0, "number of nonzero coefficients (generated data)");
    sub->add_option("--rho", st.cfg.rho, "equal-correlation parameter of the generated design");
    sub->add_option("--sigma", st.cfg.sigma, "noise standard deviation (generated data)");
    sub->add_option("--lambda", st.cfg.lambda, "penalty level (0 = default rule)");
    sub->add_option("--lambda-node", st.cfg.lambda_node,
                    "node-wise penalty (0 = sqrt(log p / n))");
    sub->add_option("--delta", st.cfg.delta, "delta grid for the ell1 bounds");
    sub->add_option("--a", st.cfg.a_grid, "a grid for tail checks");
    sub->add_option("--level", st.cfg.level, "confidence level");
    sub->add_option("--reps", st.cfg.reps, "Monte Carlo repetitions");
    sub->add_option("--seed", st.cfg.seed, "RNG seed (required for simulate)");
    sub->add_option("--input", st.cfg.input_csv, "input CSV path");
    sub->add_option("--output", st.cfg.output_path, "report path (default: stdout)");
    sub->add_flag("--has-header", st.cfg.has_header, "input CSV has a header row");
    sub->add_option("--response", st.cfg.response_column,
                    "response column name (default: last column)");
    sub->add_option("--estimator", st.estimator, "lasso | sqrt | scaled");
    sub->add_option("--sigma-source", st.sigma_source,
                    "scaled-tilde | scaled-hat | sqrt-hat | sqrt-tilde | preliminary | fixed");
    sub->add_option("--sigma-fixed", st.cfg.sigma_fixed, "value for --sigma-source fixed");
    sub->add_option("--L", st.cfg.L, "compatibility constant L");
    sub->add_option("--S", st.cfg.S_indices, "index set S (0-based)");
    sub->add_option("--chain-levels", st.cfg.chain_levels, "number of covering levels");
    sub->add_option("--chain-points", st.cfg.chain_points, "number of generated chain points");
}

// A flag given on the command line beats the config file, even when its
// value equals the built-in default.
template <typename T>
void maybe_override(const CLI::App* sub, const char* name, T& dst, const T& flag_value) {
    if (sub->count(name) > 0) dst = flag_value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lasso-family estimation, de-sparsified inference, compatibility constants and "
                 "chaining bounds with built-in Monte Carlo verification"};
    app.require_subcommand(1);

    CliState st;
    std::string preset;

    CLI::App* fit = app.add_subcommand("fit", "fit a Lasso / square-root / scaled Lasso");
    CLI::App* nodewise = app.add_subcommand("nodewise", "node-wise surrogate inverse");
    CLI::App* desparsify =
        app.add_subcommand("desparsify", "de-sparsified estimate with confidence intervals");
    CLI::App* compat = app.add_subcommand("compat", "compatibility constant phi^2(L,S)");
    CLI::App* chain = app.add_subcommand("chain", "covering chains and chaining bounds");
    CLI::App* simulate = app.add_subcommand("simulate", "seeded Monte Carlo protocols");
    for (CLI::App* sub : {fit, nodewise, desparsify, compat, chain, simulate})
        add_common_options(sub, st);
    simulate->add_option("--preset", preset, "named protocol; omit for the generic one");
    simulate->add_flag("--list-presets", "print available preset names and exit");

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().front();

    try {
        if (simulate->parsed() && simulate->count("--list-presets") > 0) {
            for (const std::string& name : hdlasso::preset_names()) std::cout << name << "\n";
            return 0;
        }

        ExperimentConfig cfg;
        if (!st.config_path.empty()) cfg = hdlasso::load_config_file(st.config_path);
        maybe_override(sub, "--n", cfg.n, st.cfg.n);
        maybe_override(sub, "--p", cfg.p, st.cfg.p);
        maybe_override(sub, "--s0", cfg.s0, st.cfg.s0);
        maybe_override(sub, "--rho", cfg.rho, st.cfg.rho);
        maybe_override(sub, "--sigma", cfg.sigma, st.cfg.sigma);
        maybe_override(sub, "--lambda", cfg.lambda, st.cfg.lambda);
        maybe_override(sub, "--lambda-node", cfg.lambda_node, st.cfg.lambda_node);
        maybe_override(sub, "--delta", cfg.delta, st.cfg.delta);
        maybe_override(sub, "--a", cfg.a_grid, st.cfg.a_grid);
        maybe_override(sub, "--level", cfg.level, st.cfg.level);
        maybe_override(sub, "--reps", cfg.reps, st.cfg.reps);
        maybe_override(sub, "--input", cfg.input_csv, st.cfg.input_csv);
        maybe_override(sub, "--output", cfg.output_path, st.cfg.output_path);
        maybe_override(sub, "--has-header", cfg.has_header, st.cfg.has_header);
        maybe_override(sub, "--response", cfg.response_column, st.cfg.response_column);
        maybe_override(sub, "--sigma-fixed", cfg.sigma_fixed, st.cfg.sigma_fixed);
        maybe_override(sub, "--L", cfg.L, st.cfg.L);
        maybe_override(sub, "--S", cfg.S_indices, st.cfg.S_indices);
        maybe_override(sub, "--chain-levels", cfg.chain_levels, st.cfg.chain_levels);
        maybe_override(sub, "--chain-points", cfg.chain_points, st.cfg.chain_points);
        if (sub->count("--seed") > 0) {
            cfg.seed = st.cfg.seed;
            cfg.seed_set = true;
        }
        if (sub->count("--estimator") > 0 || st.config_path.empty())
            cfg.estimator = hdlasso::estimator_from_name(st.estimator);
        if (sub->count("--sigma-source") > 0 || st.config_path.empty())
            cfg.sigma_source = hdlasso::sigma_source_from_name(st.sigma_source);

        if (fit->parsed()) cfg.mode = hdlasso::Mode::Fit;
        if (nodewise->parsed()) cfg.mode = hdlasso::Mode::Nodewise;
        if (desparsify->parsed()) cfg.mode = hdlasso::Mode::Desparsify;
        if (compat->parsed()) cfg.mode = hdlasso::Mode::Compat;
        if (chain->parsed()) cfg.mode = hdlasso::Mode::Chain;
        if (simulate->parsed()) {
            cfg.mode = hdlasso::Mode::Simulate;
            if (!preset.empty()) cfg.preset = preset;
        }

        const auto t0 = std::chrono::steady_clock::now();
        const hdlasso::Report report = hdlasso::run_experiment(cfg);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
        if (!cfg.output_path.empty())
            hdlasso::write_report(report, cfg.output_path);
        else
            std::cout << report.serialize();
        // timing goes to stderr only: report bytes stay a function of (config, seed)
        std::cerr << "elapsed " << elapsed.count() << "s\n";
        return report.pass ? 0 : 1;
    } catch (const hdlasso::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hdlasso::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hdlasso::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
