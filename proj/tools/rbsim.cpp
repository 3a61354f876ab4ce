// rbsim — command-line front door for the RB spin-boson simulator.
//
// Subcommands: decay, witness, photon, fit, verify.
// Exit codes: 2 config error, 3 method/mode incompatibility, 4 malformed CSV,
// 1 verify failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbsim/analysis.hpp"
#include "rbsim/avg_channel.hpp"
#include "rbsim/config.hpp"
#include "rbsim/montecarlo.hpp"
#include "rbsim/verify.hpp"

namespace {

using rbsim::DecayCurve;
namespace avg = rbsim::avg_channel;
namespace cfg_ns = rbsim::config;
namespace mc = rbsim::montecarlo;

constexpr int kExitConfig = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitCsv = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string method_override;
    std::string mode_override;
};

cfg_ns::ExperimentConfig load_config(const CommonOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::invalid_argument("config: cannot open " + opts.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto cfg = cfg_ns::parse_config(buf.str());
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.method_override.empty()) cfg.method = opts.method_override;
    if (!opts.mode_override.empty()) cfg.mode = opts.mode_override;
    return cfg;
}

std::ostream& open_output(const CommonOpts& opts, std::ofstream& file) {
    if (opts.out_path.empty()) return std::cout;
    file.open(opts.out_path);
    if (!file) throw std::invalid_argument("cannot open output file " + opts.out_path);
    return file;
}

avg::Mode parse_mode(const std::string& mode) {
    if (mode == "markovian") return avg::Mode::Markovian;
    if (mode == "xi") return avg::Mode::XI;
    return avg::Mode::NonMarkovian;
}

std::vector<int> with_depth_zero(std::vector<int> depths) {
    if (depths.empty() || depths.front() != 0) depths.insert(depths.begin(), 0);
    return depths;
}

int run_decay(const CommonOpts& opts) {
    auto cfg = load_config(opts);
    auto model = cfg_ns::make_model(cfg);
    auto rho_env = cfg_ns::env_state(cfg);
    auto rho_s = cfg_ns::system_ground_state(cfg);
    const auto depths = with_depth_zero(cfg.depths);

    if ((cfg.method == "closed" || cfg.mode == "xi") && cfg.n_qubits != 1) {
        std::cerr << "error: closed forms and the XI gateset are single-qubit only\n";
        return kExitIncompatible;
    }
    if (cfg.method == "closed" && cfg.mode == "nonmarkovian") {
        std::cerr << "error: no closed form for the non-Markovian mode\n";
        return kExitIncompatible;
    }
    if (cfg.method == "trajectory") {
        if (cfg.mode != "nonmarkovian") {
            std::cerr << "error: trajectory method applies to the non-Markovian mode\n";
            return kExitIncompatible;
        }
        if (depths.back() > 6) {
            std::cerr << "error: trajectory method is guarded to depth <= 6\n";
            return kExitIncompatible;
        }
    }

    DecayCurve curve;
    curve.depths = depths;
    if (cfg.method == "averaged") {
        curve = avg::rb_decay(model, rho_s, rho_env, depths, parse_mode(cfg.mode));
    } else if (cfg.method == "montecarlo") {
        mc::SimConfig sim;
        sim.samples = cfg.samples;
        sim.depths = depths;
        sim.seed = cfg.seed;
        sim.markovian = cfg.mode == "markovian";
        sim.gateset = cfg.mode == "xi" ? mc::Gateset::XI
                      : cfg.n_qubits == 1 ? mc::Gateset::Clifford1q
                                          : mc::Gateset::Haar;
        curve = mc::estimate_decay(model, rho_s, rho_env, sim);
    } else if (cfg.method == "closed") {
        for (int k : depths)
            curve.values.push_back(cfg.mode == "markovian"
                                       ? avg::markovian_fidelity_closed(model, rho_env, k)
                                       : avg::xi_fidelity_closed(model, rho_env, k));
    } else {  // trajectory
        for (int k : depths)
            curve.values.push_back(avg::trajectory_sum_fidelity(model, rho_env, k));
    }

    std::ofstream file;
    cfg_ns::write_decay_csv(open_output(opts, file), cfg, curve);
    return 0;
}

int run_witness(const CommonOpts& opts) {
    auto cfg = load_config(opts);
    auto model = cfg_ns::make_model(cfg);
    auto rho_env = cfg_ns::env_state(cfg);
    const int depth = cfg.depths.back();
    const auto gateset =
        cfg.n_qubits == 1 ? mc::Gateset::Clifford1q : mc::Gateset::Haar;
    auto series = mc::witness_histogram(model, rho_env, cfg.n_circuits, depth, gateset,
                                        cfg.seed, cfg.mode == "markovian");

    std::ofstream file;
    std::ostream& os = open_output(opts, file);
    cfg_ns::write_csv_header(os, cfg);
    os << "circuit_id,depth,D,deltaD\n";
    for (std::size_t c = 0; c < series.size(); ++c)
        for (std::size_t k = 0; k < series[c].depths.size(); ++k)
            os << c << ',' << series[c].depths[k] << ','
               << cfg_ns::format_value(series[c].D[k]) << ','
               << cfg_ns::format_value(series[c].deltaD[k]) << '\n';
    // Positive-increment fraction per depth.
    os << "# summary: positive_fraction per depth (threshold 1e-10)\n";
    for (int k = 1; k <= depth; ++k) {
        int positive = 0;
        for (const auto& s : series)
            if (s.deltaD[std::size_t(k)] > 1e-10) ++positive;
        os << "# positive_fraction," << k << ','
           << cfg_ns::format_value(double(positive) / double(series.size())) << '\n';
    }
    return 0;
}

int run_photon(const CommonOpts& opts) {
    auto cfg = load_config(opts);
    std::vector<int> cutoffs = cfg.cutoffs;
    if (cutoffs.empty())
        for (const auto& m : cfg.modes) cutoffs = {m.cutoff};

    std::ofstream file;
    std::ostream& os = open_output(opts, file);
    cfg_ns::write_csv_header(os, cfg);
    os << "cutoff,depth,n_avg,n_var\n";
    const auto depths = with_depth_zero(cfg.depths);
    for (int cutoff : cutoffs) {
        auto swept = cfg;
        for (auto& m : swept.modes) m.cutoff = cutoff;
        auto model = cfg_ns::make_model(swept);
        auto rho_env = cfg_ns::env_state(swept);
        auto series = avg::photon_series(model, rho_env, depths);
        for (std::size_t i = 0; i < series.depths.size(); ++i)
            os << cutoff << ',' << series.depths[i] << ','
               << cfg_ns::format_value(series.mean[i]) << ','
               << cfg_ns::format_value(series.var[i]) << '\n';
    }
    return 0;
}

int run_fit(const std::string& in_path, const std::string& model_flag,
            std::optional<double> offset_opt, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "error: cannot open " << in_path << '\n';
        return kExitCsv;
    }
    cfg_ns::ParsedCsv parsed;
    try {
        parsed = cfg_ns::read_decay_csv(in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCsv;
    }
    double offset = 0.5;
    if (offset_opt)
        offset = *offset_opt;
    else if (parsed.has_config)
        offset = 1.0 / double(Eigen::Index(1) << parsed.config.n_qubits);

    // Depth-0 point sits outside the power-law domain.
    DecayCurve curve;
    for (std::size_t i = 0; i < parsed.curve.depths.size(); ++i) {
        if (parsed.curve.depths[i] < 1) continue;
        curve.depths.push_back(parsed.curve.depths[i]);
        curve.values.push_back(parsed.curve.values[i]);
        if (i < parsed.curve.stderrs.size()) curve.stderrs.push_back(parsed.curve.stderrs[i]);
    }

    nlohmann::json report;
    auto exp_to_json = [](const rbsim::analysis::FitResult& f) {
        nlohmann::json j;
        j["model"] = f.model == rbsim::analysis::FitModel::ExpOffset ? "exp_offset"
                                                                     : "powexp_offset";
        j["A"] = f.A;
        if (f.model == rbsim::analysis::FitModel::ExpOffset) {
            j["p"] = f.p;
        } else {
            j["alpha"] = f.alpha;
            j["beta"] = f.beta;
        }
        j["offset"] = f.offset;
        j["sse"] = f.sse;
        j["converged"] = f.converged;
        return j;
    };

    std::ostringstream text;
    if (model_flag == "exp") {
        auto f = rbsim::analysis::fit_exponential(curve, offset);
        report["fit"] = exp_to_json(f);
        text << "exp_offset: A=" << cfg_ns::format_value(f.A)
             << " p=" << cfg_ns::format_value(f.p) << " B=" << cfg_ns::format_value(f.offset)
             << " sse=" << cfg_ns::format_value(f.sse) << '\n';
    } else if (model_flag == "powexp") {
        auto f = rbsim::analysis::fit_power_exponential(curve, offset);
        report["fit"] = exp_to_json(f);
        text << "powexp_offset: A=" << cfg_ns::format_value(f.A)
             << " alpha=" << cfg_ns::format_value(f.alpha)
             << " beta=" << cfg_ns::format_value(f.beta)
             << " B=" << cfg_ns::format_value(f.offset)
             << " sse=" << cfg_ns::format_value(f.sse) << '\n';
    } else {
        auto cmpres = rbsim::analysis::compare_models(curve, offset);
        report["exp"] = exp_to_json(cmpres.exp_fit);
        report["powexp"] = exp_to_json(cmpres.powexp_fit);
        report["sse_ratio"] = cmpres.sse_ratio;
        report["classification"] =
            cmpres.non_exponential ? "non-exponential" : "exponential";
        text << "exp:    A=" << cfg_ns::format_value(cmpres.exp_fit.A)
             << " p=" << cfg_ns::format_value(cmpres.exp_fit.p)
             << " sse=" << cfg_ns::format_value(cmpres.exp_fit.sse) << '\n'
             << "powexp: A=" << cfg_ns::format_value(cmpres.powexp_fit.A)
             << " alpha=" << cfg_ns::format_value(cmpres.powexp_fit.alpha)
             << " beta=" << cfg_ns::format_value(cmpres.powexp_fit.beta)
             << " sse=" << cfg_ns::format_value(cmpres.powexp_fit.sse) << '\n'
             << "sse_ratio=" << cfg_ns::format_value(cmpres.sse_ratio)
             << " classification=" << report["classification"].get<std::string>() << '\n';
    }

    std::cout << text.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int run_verify() {
    auto checks = rbsim::verify::run_all();
    bool all_pass = true;
    std::printf("%-36s %12s %14s  %s\n", "check", "tolerance", "observed", "result");
    for (const auto& c : checks) {
        std::printf("%-36s %12.3g %14.6g  %s\n", c.name.c_str(), c.tolerance, c.observed,
                    c.pass ? "pass" : "FAIL");
        all_pass = all_pass && c.pass;
    }
    if (!all_pass) {
        std::printf("verify: FAILED\n");
        return 1;
    }
    std::printf("verify: all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized-benchmarking simulator for qubits coupled to a bosonic bath"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string fit_input, fit_model = "both", fit_out;
    std::optional<double> fit_offset;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opts.config_path, "JSON config path");
        if (needs_config) c->required();
        sub->add_option("--out", opts.out_path, "output CSV path (default stdout)");
        sub->add_option("--seed", opts.seed, "seed override");
        sub->add_option("--method", opts.method_override,
                        "averaged|montecarlo|closed|trajectory");
        sub->add_option("--mode", opts.mode_override, "nonmarkovian|markovian|xi");
    };

    auto* decay = app.add_subcommand("decay", "RB decay curve");
    add_common(decay, true);
    auto* witness = app.add_subcommand("witness", "trace-distance witness series");
    add_common(witness, true);
    auto* photon = app.add_subcommand("photon", "bath photon statistics");
    add_common(photon, true);
    auto* fit = app.add_subcommand("fit", "fit a decay CSV");
    fit->add_option("input", fit_input, "decay CSV")->required();
    fit->add_option("--model", fit_model, "exp|powexp|both");
    fit->add_option("--offset", fit_offset, "fixed offset (default 1/d from header)");
    fit->add_option("--out", fit_out, "machine-readable report path");
    auto* verify = app.add_subcommand("verify", "run the self-check battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decay->parsed()) return run_decay(opts);
        if (witness->parsed()) return run_witness(opts);
        if (photon->parsed()) return run_photon(opts);
        if (fit->parsed()) return run_fit(fit_input, fit_model, fit_offset, fit_out);
        if (verify->parsed()) return run_verify();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
