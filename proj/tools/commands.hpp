#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bprh::cli {

/// Default RNG seed used by every subcommand unless --seed is given.
inline constexpr std::uint64_t kDefaultSeed = 12345;

struct SimulateConfig {
    std::string family = "bprhm1";
    std::string baseline;
    std::vector<double> params;
    std::size_t n = 100;
    double p = 0.0;
    std::uint64_t seed = kDefaultSeed;
    std::string out_dir = ".";
    std::string sampler = "conditional";  // conditional | paper-literal | oracle
    std::string prefix = "sample";
};
int cmd_simulate(const SimulateConfig& config);

struct GofConfig {
    std::string model_json;  // path to a model JSON; alternative to the string triple
    std::string family;
    std::string baseline;
    std::vector<double> params;
    std::string data;
    std::string meta;  // sidecar path; defaults to <data>.meta.json when present
    int replicates = 500;
    std::uint64_t seed = kDefaultSeed;
    std::string out_json;
    double fail_below = 0.0;  // exit 1 when any p-value drops below this
};
int cmd_gof(const GofConfig& config);

struct FitConfig {
    std::string family = "bprhm1";
    std::string baseline_family = "weibull";
    std::string data;
    int starts = 5;
    std::uint64_t seed = kDefaultSeed;
    std::string out_json;
    bool standard_errors = false;
};
int cmd_fit(const FitConfig& config);

struct VerifyConfig {
    int grid = 1000;
    int mc_size = 100000;
    std::uint64_t seed = kDefaultSeed;
    double perturb = 0.0;  // relative perturbation for the negative controls
    std::string out_json;
    std::vector<std::string> model_json_paths;  // extra models to run the suite on
};
int cmd_verify(const VerifyConfig& config);

struct AnalyzeConfig {
    std::string data = "data/football.csv";
    std::string out_dir = ".";
    int starts = 5;
    std::uint64_t seed = kDefaultSeed;
    double scale = 0.01;  // recorded decimal minutes are divided by 100
};
int cmd_analyze(const AnalyzeConfig& config);

struct CurvesConfig {
    std::string model_json;
    std::string family;
    std::string baseline;
    std::vector<double> params;
    std::string data;
    std::string out_dir = ".";
    double scale = 1.0;
};
int cmd_curves(const CurvesConfig& config);

}  // namespace bprh::cli
