#pragma once
// Run manifest: every resolved parameter, the seed, and the declared
// outputs, written as JSON before any heavy computation starts.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqed/io/config.hpp"

namespace cqed::io {

inline constexpr const char* kToolVersion = "1.0.0";

inline void write_manifest(const std::string& path,
                           const ExperimentConfig& cfg,
                           const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["tool"] = "cqed";
    j["version"] = kToolVersion;
    j["experiment"] = to_string(cfg.kind);
    j["seed"] = cfg.seed;
    j["outputs"] = outputs;
    j["config"] = serialize_config(cfg);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace cqed::io
