#include "hdlasso/config.hpp"

#include <cmath>
#include <fstream>

#include "hdlasso/errors.hpp"

namespace hdlasso {

void ExperimentConfig::validate() const {
    if (n < 1 || p < 1) throw DomainError("config: n and p must be >= 1");
    if (s0 < 0 || s0 > p) throw DomainError("config: s0 outside [0, p]");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("config: rho outside [0,1)");
    if (sigma < 0.0) throw DomainError("config: negative sigma");
    if (lambda < 0.0 || lambda_node < 0.0) throw DomainError("config: negative penalty");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("config: level outside (0,1)");
    if (reps < 0) throw DomainError("config: negative reps");
    if (mode == Mode::Simulate && !seed_set)
        throw DomainError("config: simulate mode requires an explicit seed");
    for (double d : delta)
        if (!(d >= 0.0 && d < 1.0)) throw DomainError("config: delta outside [0,1)");
    for (double a : a_grid)
        if (a <= 0.0) throw DomainError("config: a grid entries must be positive");
    for (int s : S_indices)
        if (s < 0 || s >= p) throw DomainError("config: S index out of range");
    if (chain_levels < 1 || chain_points < 1) throw DomainError("config: bad chain settings");
}

double ExperimentConfig::default_lambda_node() const {
    return lambda_node > 0.0 ? lambda_node : std::sqrt(std::log(static_cast<double>(p)) / n);
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Fit: return "fit";
        case Mode::Nodewise: return "nodewise";
        case Mode::Desparsify: return "desparsify";
        case Mode::Compat: return "compat";
        case Mode::Chain: return "chain";
        case Mode::Simulate: return "simulate";
    }
    return "unknown";
}

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::Lasso: return "lasso";
        case Estimator::Sqrt: return "sqrt";
        case Estimator::Scaled: return "scaled";
    }
    return "unknown";
}

const char* sigma_source_name(SigmaSource s) {
    switch (s) {
        case SigmaSource::ScaledTilde: return "scaled-tilde";
        case SigmaSource::ScaledHat: return "scaled-hat";
        case SigmaSource::SqrtHat: return "sqrt-hat";
        case SigmaSource::SqrtTilde: return "sqrt-tilde";
        case SigmaSource::Preliminary: return "preliminary";
        case SigmaSource::Fixed: return "fixed";
    }
    return "unknown";
}

Mode mode_from_name(const std::string& name) {
    for (Mode m : {Mode::Fit, Mode::Nodewise, Mode::Desparsify, Mode::Compat, Mode::Chain,
                   Mode::Simulate})
        if (name == mode_name(m)) return m;
    throw DomainError("config: unknown mode '" + name + "'");
}

Estimator estimator_from_name(const std::string& name) {
    for (Estimator e : {Estimator::Lasso, Estimator::Sqrt, Estimator::Scaled})
        if (name == estimator_name(e)) return e;
    throw DomainError("config: unknown estimator '" + name + "'");
}

SigmaSource sigma_source_from_name(const std::string& name) {
    for (SigmaSource s : {SigmaSource::ScaledTilde, SigmaSource::ScaledHat, SigmaSource::SqrtHat,
                          SigmaSource::SqrtTilde, SigmaSource::Preliminary, SigmaSource::Fixed})
        if (name == sigma_source_name(s)) return s;
    throw DomainError("config: unknown sigma source '" + name + "'");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("p")) cfg.p = j.at("p").get<int>();
    if (j.contains("s0")) cfg.s0 = j.at("s0").get<int>();
    if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
    if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("lambda_node")) cfg.lambda_node = j.at("lambda_node").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<std::vector<double>>();
    if (j.contains("a")) cfg.a_grid = j.at("a").get<std::vector<double>>();
    if (j.contains("level")) cfg.level = j.at("level").get<double>();
    if (j.contains("reps")) cfg.reps = j.at("reps").get<int>();
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_set = true;
    }
    if (j.contains("input_csv")) cfg.input_csv = j.at("input_csv").get<std::string>();
    if (j.contains("output")) cfg.output_path = j.at("output").get<std::string>();
    if (j.contains("has_header")) cfg.has_header = j.at("has_header").get<bool>();
    if (j.contains("response_column"))
        cfg.response_column = j.at("response_column").get<std::string>();
    if (j.contains("estimator"))
        cfg.estimator = estimator_from_name(j.at("estimator").get<std::string>());
    if (j.contains("sigma_source"))
        cfg.sigma_source = sigma_source_from_name(j.at("sigma_source").get<std::string>());
    if (j.contains("sigma_fixed")) cfg.sigma_fixed = j.at("sigma_fixed").get<double>();
    if (j.contains("L")) cfg.L = j.at("L").get<double>();
    if (j.contains("S")) cfg.S_indices = j.at("S").get<std::vector<int>>();
    if (j.contains("chain_levels")) cfg.chain_levels = j.at("chain_levels").get<int>();
    if (j.contains("chain_points")) cfg.chain_points = j.at("chain_points").get<int>();
    return cfg;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["mode"] = mode_name(cfg.mode);
    if (!cfg.preset.empty()) j["preset"] = cfg.preset;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["s0"] = cfg.s0;
    j["rho"] = cfg.rho;
    j["sigma"] = cfg.sigma;
    j["lambda"] = cfg.lambda;
    j["lambda_node"] = cfg.lambda_node;
    j["delta"] = cfg.delta;
    j["a"] = cfg.a_grid;
    j["level"] = cfg.level;
    j["reps"] = cfg.reps;
    j["seed"] = cfg.seed;
    // the report destination is not an experiment parameter; leaving it out
    // keeps reports byte-identical regardless of where they are written
    if (!cfg.input_csv.empty()) j["input_csv"] = cfg.input_csv;
    j["has_header"] = cfg.has_header;
    if (!cfg.response_column.empty()) j["response_column"] = cfg.response_column;
    j["estimator"] = estimator_name(cfg.estimator);
    j["sigma_source"] = sigma_source_name(cfg.sigma_source);
    j["sigma_fixed"] = cfg.sigma_fixed;
    j["L"] = cfg.L;
    j["S"] = cfg.S_indices;
    j["chain_levels"] = cfg.chain_levels;
    j["chain_points"] = cfg.chain_points;
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'", 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config parse failure: ") + e.what(), 0);
    }
    return config_from_json(j);
}

}  // namespace hdlasso
