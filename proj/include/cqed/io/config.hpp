#pragma once
// Experiment configs: flat key=value with [section] headers, unit
// suffixes, line-numbered diagnostics, and canonical serialization.
//
// Units: bare numbers are in the working units (times in us, angular
// frequencies in rad/us, rates in 1/us). Recognized suffixes:
//   time:    us, ns, ms
//   angular: rad_per_us, MHz, kHz, GHz (linear frequency, converted by 2pi)
//   rate:    per_us, per_ms
// Suffixes on dimensionless, integer, or string keys are rejected.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/spectral_density.hpp"
#include "cqed/spin_bath.hpp"

namespace cqed::io {

enum class ExperimentKind {
    fid,
    cpmg,
    eseem,
    transmission,
    signal,
    oracle_compare,
    reconstruct,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct SequenceSpec {
    int n_pulses = 1;
    double tau = 0.0;       // pulse spacing (CPMG) in us
    double duration = 0.0;  // free evolution length for fid
    std::vector<double> custom_pulses;

    bool is_custom() const { return !custom_pulses.empty(); }
};

struct SpectrumSpec {
    std::vector<SpectralLine> lines;
    std::string table_path;          // classical tabulated part
    std::string quantum_table_path;  // optional, shares the grid

    bool empty() const { return lines.empty() && table_path.empty(); }
};

struct GridSpec {
    double time_start = 0.0;
    double time_stop = 0.0;
    int time_points = 0;
    double freq_start = 0.0;
    double freq_stop = 0.0;
    int freq_points = 0;
};

struct TransmissionSpec {
    int probe_points = 2001;
    double tolerance = 1e-8;
};

struct SignalSpec {
    int n_echoes = 0;
    double t_on = -1.0;  // >= 0 selects the pulsed-coupling protocol
    double sigma_x0 = 1.0;
};

struct ReconstructSpec {
    int n_echoes = 0;
    int detunings = 0;  // 0 -> n_echoes + 1
    double threshold = 1e-6;
};

struct OracleSpec {
    std::string line_mode = "markovian";  // or "discretized"
    int modes = 2048;
    double span = 0.0;     // half-width of the line-frequency grid; 0 -> 15 kappa
    double t_final = 0.0;  // 0 -> n tau + 40/kappa
    int samples_per_tau = 8;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::fid;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    SystemParams system;
    SequenceSpec sequence;
    SpinBathParams spin;
    bool has_spin = false;
    SpectrumSpec spectrum;
    GridSpec grids;
    TransmissionSpec transmission;
    SignalSpec signal;
    ReconstructSpec reconstruct;
    OracleSpec oracle;
};

struct ConfigDiagnostic {
    int line = 0;
    std::string message;
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<ConfigDiagnostic> diags)
        : std::runtime_error(join(diags)), diagnostics(std::move(diags)) {}

    std::vector<ConfigDiagnostic> diagnostics;

  private:
    static std::string join(const std::vector<ConfigDiagnostic>& diags);
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

bool operator==(const SequenceSpec& a, const SequenceSpec& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace cqed::io
