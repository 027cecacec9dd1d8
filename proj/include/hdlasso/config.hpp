#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hdlasso {

enum class Mode { Fit, Nodewise, Desparsify, Compat, Chain, Simulate };
enum class Estimator { Lasso, Sqrt, Scaled };

// Scale estimate used to studentize the de-sparsified coordinates.
enum class SigmaSource { ScaledTilde, ScaledHat, SqrtHat, SqrtTilde, Preliminary, Fixed };

struct ExperimentConfig {
    Mode mode = Mode::Simulate;
    std::string preset;  // named protocol for simulate mode; empty = generic

    int n = 50;
    int p = 100;
    int s0 = 3;
    double rho = 0.0;
    double sigma = 1.0;

    double lambda = 0.0;       // 0 → default 2·theoretical_lambda(n,p,1)·σ-proxy
    double lambda_node = 0.0;  // 0 → sqrt(log p / n)
    std::vector<double> delta = {0.1, 0.5};
    std::vector<double> a_grid = {1.0, 2.0, 3.0};
    double level = 0.95;

    int reps = 100;
    std::uint64_t seed = 1;
    bool seed_set = false;  // simulate mode requires an explicit seed

    std::string input_csv;
    std::string output_path;
    bool has_header = false;
    std::string response_column;

    Estimator estimator = Estimator::Lasso;
    SigmaSource sigma_source = SigmaSource::ScaledTilde;
    double sigma_fixed = 1.0;

    double L = 2.0;                  // compat mode
    std::vector<int> S_indices = {0};

    int chain_levels = 5;   // chain mode
    int chain_points = 32;

    void validate() const;
    double default_lambda_node() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

const char* mode_name(Mode m);
const char* estimator_name(Estimator e);
const char* sigma_source_name(SigmaSource s);
Mode mode_from_name(const std::string& name);
Estimator estimator_from_name(const std::string& name);
SigmaSource sigma_source_from_name(const std::string& name);

}  // namespace hdlasso
