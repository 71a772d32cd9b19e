#pragma once

#include <string>
#include <vector>

#include "horo/io.hpp"

namespace horo {

std::vector<std::string> experiment_types();

// Validates `params` against the schema of `type`; one message per bad field.
std::vector<std::string> validate_params(const std::string& type, const json& params);

// Never throws: failures land in record.errors.
ExperimentRecord run_experiment(const std::string& id, const std::string& type, const json& params,
                                std::uint64_t seed, bool timing = false);

struct RunResult {
    int status = 0;  // 0 all records ok, 1 some record failed, 2 config rejected
    std::vector<std::string> config_errors;
    std::vector<ExperimentRecord> records;
    json manifest;
};
// config: {"seed": 0, "threads": 1, "experiments": [{"id", "type", "params"}]}.
// Writes records.json, one CSV per tabular record and manifest.json into
// out_dir (skipped when out_dir is empty).
RunResult run(const json& config, const std::string& out_dir, bool timing = false);

int cli_main(int argc, char** argv);

}  // namespace horo
