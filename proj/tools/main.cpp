#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "bprh - bivariate proportional reversed hazards models: simulation, left-censored "
        "fitting, goodness of fit, and identity verification"};
    app.require_subcommand(1);

    bprh::cli::SimulateConfig sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw a (possibly left-censored) sample");
    c_sim->add_option("--family", sim.family, "Model family: bprhm1 | bprhm2")->required();
    c_sim->add_option("--baseline", sim.baseline,
                      "Baseline as family:params, e.g. weibull:1.5,1.2 or invexp")
        ->required();
    c_sim->add_option("--params", sim.params,
                      "Model parameters: alpha1,alpha2,alpha3 or theta1,theta2,theta1',theta2'")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--n", sim.n, "Sample size")->default_val(100);
    c_sim->add_option("--p", sim.p, "Target censoring fraction per coordinate (0 disables)")
        ->default_val(0.0);
    c_sim->add_option("--seed", sim.seed, "RNG seed (default 12345)")->default_val(12345);
    c_sim->add_option("--out", sim.out_dir, "Output directory")->default_val(".");
    c_sim->add_option("--prefix", sim.prefix, "Output file prefix")->default_val("sample");
    c_sim->add_option("--sampler", sim.sampler, "conditional | paper-literal | oracle")
        ->default_val("conditional");
    c_sim->add_flag_callback("--paper-literal",
                             [&sim]() { sim.sampler = "paper-literal"; },
                             "Shorthand for --sampler paper-literal");

    bprh::cli::GofConfig gof;
    auto* c_gof = app.add_subcommand("gof", "Kolmogorov-Smirnov goodness-of-fit report");
    c_gof->add_option("--model", gof.model_json, "Model JSON file {family, baseline, params}");
    c_gof->add_option("--family", gof.family, "Model family (with --baseline/--params)");
    c_gof->add_option("--baseline", gof.baseline, "Baseline string");
    c_gof->add_option("--params", gof.params, "Model parameters")->delimiter(',');
    c_gof->add_option("--data", gof.data, "Sample CSV (y1,y2,delta1,delta2)")->required();
    c_gof->add_option("--meta", gof.meta, "Sidecar metadata JSON (default <data>.meta.json)");
    c_gof->add_option("--replicates", gof.replicates, "Bootstrap replicates for the bivariate test")
        ->default_val(500);
    c_gof->add_option("--seed", gof.seed, "RNG seed (default 12345)")->default_val(12345);
    c_gof->add_option("--out", gof.out_json, "Write the report as JSON to this path");
    c_gof->add_option("--fail-below", gof.fail_below,
                      "Exit with status 1 when any p-value is below this level");

    bprh::cli::FitConfig fit;
    auto* c_fit = app.add_subcommand("fit", "Left-censored maximum likelihood fit");
    c_fit->add_option("--family", fit.family, "Model family: bprhm1 | bprhm2")->required();
    c_fit->add_option("--baseline", fit.baseline_family,
                      "Baseline family name, e.g. weibull (parameters are estimated)")
        ->required();
    c_fit->add_option("--data", fit.data, "Sample CSV")->required();
    c_fit->add_option("--starts", fit.starts, "Multistart restarts")->default_val(5);
    c_fit->add_option("--seed", fit.seed, "RNG seed (default 12345)")->default_val(12345);
    c_fit->add_option("--out", fit.out_json, "Write the fit result as JSON to this path");
    c_fit->add_flag("--standard-errors", fit.standard_errors,
                    "Report inverse-Hessian standard errors when available");

    bprh::cli::VerifyConfig verify;
    auto* c_verify = app.add_subcommand(
        "verify", "Run the characterization identity and moment-recursion suite");
    c_verify->add_option("--grid", verify.grid, "Random evaluation points per identity")
        ->default_val(1000);
    c_verify->add_option("--mc-size", verify.mc_size, "Monte Carlo draws per moment cell")
        ->default_val(100000);
    c_verify->add_option("--seed", verify.seed, "RNG seed (default 12345)")->default_val(12345);
    c_verify->add_option("--perturb", verify.perturb,
                         "Relative parameter perturbation: run the negative controls instead");
    c_verify->add_option("--out", verify.out_json, "Write the pass/fail matrix as JSON");
    c_verify->add_option("--model", verify.model_json_paths,
                         "Extra model JSON files to include in the identity checks");

    bprh::cli::AnalyzeConfig analyze;
    auto* c_analyze = app.add_subcommand(
        "analyze", "Fit the scoring-time dataset under four baselines and report AIC + K-S");
    c_analyze->add_option("--data", analyze.data, "Dataset CSV (y1,y2 decimal minutes)")
        ->default_val("data/football.csv");
    c_analyze->add_option("--out", analyze.out_dir, "Output directory")->default_val(".");
    c_analyze->add_option("--starts", analyze.starts, "Multistart restarts")->default_val(5);
    c_analyze->add_option("--seed", analyze.seed, "RNG seed (default 12345)")->default_val(12345);
    c_analyze->add_option("--scale", analyze.scale, "Scale applied to raw values")
        ->default_val(0.01);

    bprh::cli::CurvesConfig curves;
    auto* c_curves = app.add_subcommand(
        "curves", "Emit theoretical vs empirical cdf series for max/y1/y2");
    c_curves->add_option("--model", curves.model_json, "Model JSON file");
    c_curves->add_option("--family", curves.family, "Model family");
    c_curves->add_option("--baseline", curves.baseline, "Baseline string");
    c_curves->add_option("--params", curves.params, "Model parameters")->delimiter(',');
    c_curves->add_option("--data", curves.data, "Sample CSV")->required();
    c_curves->add_option("--out", curves.out_dir, "Output directory")->default_val(".");
    c_curves->add_option("--scale", curves.scale, "Scale applied to raw values")->default_val(1.0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_sim->parsed()) return bprh::cli::cmd_simulate(sim);
        if (c_gof->parsed()) return bprh::cli::cmd_gof(gof);
        if (c_fit->parsed()) return bprh::cli::cmd_fit(fit);
        if (c_verify->parsed()) return bprh::cli::cmd_verify(verify);
        if (c_analyze->parsed()) return bprh::cli::cmd_analyze(analyze);
        if (c_curves->parsed()) return bprh::cli::cmd_curves(curves);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
