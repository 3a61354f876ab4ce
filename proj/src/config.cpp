#include "rbsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rbsim::config {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "n_qubits", "modes", "g",    "dt",   "beta",    "depths",
    "samples",  "seed",  "mode", "method", "cutoffs", "n_circuits"};

double parse_beta(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("config: beta string must be \"inf\"");
    }
    return j.get<double>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    for (const auto& [key, _] : j.items())
        if (!kKnownKeys.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");

    ExperimentConfig cfg;
    try {
        if (j.contains("n_qubits")) cfg.n_qubits = j["n_qubits"].get<int>();
        if (j.contains("modes")) {
            cfg.modes.clear();
            for (const auto& m : j["modes"])
                cfg.modes.push_back({m.at("omega").get<double>(), m.at("cutoff").get<int>()});
        }
        if (j.contains("g")) {
            cfg.g.clear();
            if (j["g"].is_number()) {
                const double gval = j["g"].get<double>();
                for (std::size_t i = 0; i < cfg.modes.size(); ++i)
                    cfg.g.emplace_back(std::size_t(cfg.n_qubits), gval);
            } else {
                cfg.g = j["g"].get<std::vector<std::vector<double>>>();
            }
        } else {
            cfg.g.assign(cfg.modes.size(), std::vector<double>(std::size_t(cfg.n_qubits), 4.0));
        }
        if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
        if (j.contains("beta")) cfg.beta = parse_beta(j["beta"]);
        if (j.contains("depths")) cfg.depths = j["depths"].get<std::vector<int>>();
        if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
        if (j.contains("method")) cfg.method = j["method"].get<std::string>();
        if (j.contains("cutoffs")) cfg.cutoffs = j["cutoffs"].get<std::vector<int>>();
        if (j.contains("n_circuits")) cfg.n_circuits = j["n_circuits"].get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    if (cfg.n_qubits < 1) throw std::invalid_argument("config: n_qubits must be >= 1");
    if (cfg.modes.empty()) throw std::invalid_argument("config: modes must be non-empty");
    if (!(cfg.dt > 0)) throw std::invalid_argument("config: dt must be > 0");
    if (!(cfg.beta > 0)) throw std::invalid_argument("config: beta must be > 0");
    if (cfg.samples < 1) throw std::invalid_argument("config: samples must be >= 1");
    if (cfg.n_circuits < 1) throw std::invalid_argument("config: n_circuits must be >= 1");
    if (cfg.depths.empty()) throw std::invalid_argument("config: depths must be non-empty");
    for (std::size_t i = 1; i < cfg.depths.size(); ++i)
        if (cfg.depths[i] <= cfg.depths[i - 1])
            throw std::invalid_argument("config: depths must be strictly increasing");
    if (cfg.depths.front() < 0) throw std::invalid_argument("config: depths must be >= 0");
    if (cfg.mode != "nonmarkovian" && cfg.mode != "markovian" && cfg.mode != "xi")
        throw std::invalid_argument("config: mode must be nonmarkovian|markovian|xi");
    if (cfg.method != "averaged" && cfg.method != "montecarlo" && cfg.method != "closed" &&
        cfg.method != "trajectory")
        throw std::invalid_argument("config: method must be averaged|montecarlo|closed|trajectory");
    if (cfg.g.size() != cfg.modes.size())
        throw std::invalid_argument("config: g rows must match mode count");
    for (const auto& row : cfg.g)
        if (row.size() != std::size_t(cfg.n_qubits))
            throw std::invalid_argument("config: g cols must match qubit count");
    for (const auto& m : cfg.modes) fock::validate(m);
    return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
    json j;
    j["n_qubits"] = cfg.n_qubits;
    j["modes"] = json::array();
    for (const auto& m : cfg.modes) j["modes"].push_back({{"omega", m.omega}, {"cutoff", m.cutoff}});
    j["g"] = cfg.g;
    j["dt"] = cfg.dt;
    if (std::isinf(cfg.beta))
        j["beta"] = "inf";
    else
        j["beta"] = cfg.beta;
    j["depths"] = cfg.depths;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["mode"] = cfg.mode;
    j["method"] = cfg.method;
    if (!cfg.cutoffs.empty()) j["cutoffs"] = cfg.cutoffs;
    j["n_circuits"] = cfg.n_circuits;
    return j.dump();
}

spin_boson::SpinBosonModel make_model(const ExperimentConfig& cfg) {
    spin_boson::SpinBosonModel model;
    model.n_qubits = cfg.n_qubits;
    model.env.modes = cfg.modes;
    model.g = cfg.g;
    model.dt = cfg.dt;
    spin_boson::validate(model);
    return model;
}

fock::Mat env_state(const ExperimentConfig& cfg) {
    fock::EnvSpace space{cfg.modes};
    return fock::thermal_state(space, cfg.beta);
}

fock::Mat system_ground_state(const ExperimentConfig& cfg) {
    const Eigen::Index d = Eigen::Index(1) << cfg.n_qubits;
    fock::Mat rho = fock::Mat::Zero(d, d);
    rho(0, 0) = 1.0;
    return rho;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv_header(std::ostream& os, const ExperimentConfig& cfg) {
    os << "# version: " << kVersion << "\n";
    os << "# config: " << to_json(cfg) << "\n";
}

void write_decay_csv(std::ostream& os, const ExperimentConfig& cfg, const DecayCurve& curve) {
    write_csv_header(os, cfg);
    os << "depth,value,stderr\n";
    for (std::size_t i = 0; i < curve.depths.size(); ++i) {
        os << curve.depths[i] << ',' << format_value(curve.values[i]) << ',';
        if (i < curve.stderrs.size()) os << format_value(curve.stderrs[i]);
        os << '\n';
    }
}

ParsedCsv read_decay_csv(std::istream& is) {
    ParsedCsv out;
    std::string line;
    bool saw_columns = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# config: ";
            if (line.rfind(tag, 0) == 0) {
                out.config = parse_config(line.substr(tag.size()));
                out.has_config = true;
            }
            continue;
        }
        if (!saw_columns) {
            if (line != "depth,value,stderr")
                throw std::invalid_argument("csv: expected header 'depth,value,stderr'");
            saw_columns = true;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        try {
            if (!std::getline(row, field, ',')) throw std::invalid_argument("csv: short row");
            out.curve.depths.push_back(std::stoi(field));
            if (!std::getline(row, field, ',')) throw std::invalid_argument("csv: short row");
            out.curve.values.push_back(std::stod(field));
            if (std::getline(row, field, ',') && !field.empty())
                out.curve.stderrs.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw std::invalid_argument("csv: malformed row '" + line + "'");
        }
    }
    if (!saw_columns || out.curve.depths.empty())
        throw std::invalid_argument("csv: no data rows");
    if (!out.curve.stderrs.empty() && out.curve.stderrs.size() != out.curve.values.size())
        out.curve.stderrs.clear();  // mixed rows: treat as unweighted
    return out;
}

}  // namespace rbsim::config
