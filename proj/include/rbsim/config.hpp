// config.hpp — Experiment configuration (JSON in) and CSV emission.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbsim/curve.hpp"
#include "rbsim/fock.hpp"
#include "rbsim/spin_boson.hpp"

namespace rbsim::config {

inline constexpr const char* kVersion = "rbsim 0.1.0";

struct ExperimentConfig {
    int n_qubits = 1;
    std::vector<fock::ModeSpec> modes = {{10.0, 10}};
    std::vector<std::vector<double>> g = {{4.0}};  // g[mode][qubit]
    double dt = 0.1;
    double beta = std::numeric_limits<double>::infinity();  // "inf" accepted
    std::vector<int> depths = {1, 2, 5, 10, 20};
    int samples = 100;
    std::uint64_t seed = 0;
    std::string mode = "nonmarkovian";  // nonmarkovian | markovian | xi
    std::string method = "averaged";    // averaged | montecarlo | closed | trajectory
    std::vector<int> cutoffs;           // photon sweep; defaults to the mode cutoffs
    int n_circuits = 100;               // witness circuits

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate; throws std::invalid_argument on bad or unknown keys.
ExperimentConfig parse_config(const std::string& json_text);
std::string to_json(const ExperimentConfig& cfg);

spin_boson::SpinBosonModel make_model(const ExperimentConfig& cfg);
fock::Mat env_state(const ExperimentConfig& cfg);
fock::Mat system_ground_state(const ExperimentConfig& cfg);

/// Locale-independent formatting, 12 significant digits.
std::string format_value(double v);

/// `#`-prefixed metadata header (version + config round-trip line).
void write_csv_header(std::ostream& os, const ExperimentConfig& cfg);

void write_decay_csv(std::ostream& os, const ExperimentConfig& cfg, const DecayCurve& curve);

/// Reads a decay CSV (same schema as write_decay_csv). Returns the curve
/// and, when the header carries one, the embedded config.
struct ParsedCsv {
    DecayCurve curve;
    bool has_config = false;
    ExperimentConfig config;
};

ParsedCsv read_decay_csv(std::istream& is);

}  // namespace rbsim::config
