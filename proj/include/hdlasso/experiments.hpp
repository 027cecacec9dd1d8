#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hdlasso/config.hpp"

namespace hdlasso {

// Structured experiment output: config echo, per-rep records, aggregates and
// named pass/fail checks. Serialization is deterministic — identical
// (config, seed) pairs produce byte-identical documents.
struct Report {
    nlohmann::ordered_json doc;
    bool pass = true;

    std::string serialize() const { return doc.dump(2) + "\n"; }
};

Report run_experiment(const ExperimentConfig& cfg);

// Acceptance protocols; every criterion of the verification suite is one
// named preset runnable from the CLI.
std::vector<std::string> preset_names();
Report run_preset(const std::string& name, ExperimentConfig cfg);

void write_report(const Report& report, const std::string& path);

}  // namespace hdlasso
