#pragma once
// Named experiment pipelines behind the CLI: each writes a manifest, data
// CSVs, and a machine-readable check summary under the output directory.

#include <string>
#include <vector>

#include "cqed/io/config.hpp"

namespace cqed::io {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunResult {
    std::vector<std::string> outputs;
    std::vector<CheckResult> checks;

    bool all_checks_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Runs the pipeline selected by cfg.kind. Throws ConfigError for setup
// problems and std::runtime_error for numerical failures.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace cqed::io
