// montecarlo.hpp — Exact sampled-circuit RB simulation: random gate
// sampling, joint unitary evolution, fidelity estimation with error bars,
// and non-Markovianity witnesses.

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rbsim/avg_channel.hpp"
#include "rbsim/curve.hpp"
#include "rbsim/spin_boson.hpp"

namespace rbsim::montecarlo {

using fock::Mat;
using spin_boson::SpinBosonModel;

// Stream splitting: every stochastic quantity is drawn from an mt19937_64
// seeded with splitmix64 applied to the (seed, depth index, sample index)
// tuple. The split scheme is normative; results are pure functions of it.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t depth_index,
                            std::uint64_t sample_index);

enum class Gateset { Haar, Clifford1q, XI };

struct SimConfig {
    int samples = 100;
    std::vector<int> depths;
    std::uint64_t seed = 0;
    bool markovian = false;
    Gateset gateset = Gateset::Haar;
};

struct GateSequence {
    std::vector<Mat> gates;
    Mat inverse;  // (U_k ... U_1)^{-1}
};

/// Haar-distributed unitary via Ginibre + QR with phase correction.
Mat haar_unitary(int d, std::mt19937_64& rng);

/// The 24 single-qubit Cliffords, generated from H and S, deduplicated up
/// to global phase.
const std::vector<Mat>& clifford_1q_table();

GateSequence sample_sequence(int d, int depth, Gateset gateset, std::mt19937_64& rng);

/// Runs U_1, step, ..., U_k, step, inverse. Returns (system state, env state).
std::pair<Mat, Mat> simulate_sequence(const SpinBosonModel& model, const Mat& rho_s,
                                      const Mat& rho_env, const GateSequence& seq,
                                      bool markovian);

/// Mean survival and standard error per depth over cfg.samples sequences.
/// Samples run in parallel (RBSIM_THREADS overrides the worker count) and
/// are aggregated in sample order.
DecayCurve estimate_decay(const SpinBosonModel& model, const Mat& rho_s, const Mat& rho_env,
                          const SimConfig& cfg);

/// Phase factor f_k = (-1)^{u_1}(1 + f_{k-1}) of the XI gateset.
int xi_phase_factor(const std::vector<int>& u);

/// Exact uniform average of the simulated |+> survival over all 2^k
/// X/I strings; no sampling error. Guarded enumeration.
double xi_exact_average(const SpinBosonModel& model, const Mat& rho_env, int k,
                        int k_limit = 14);

/// Trace distance between the |0>- and |1>-seeded evolutions after each of
/// the first k steps of one shared circuit (no inverse applied).
struct WitnessSeries {
    std::vector<int> depths;
    std::vector<double> D;
    std::vector<double> deltaD;  // D_k - D_{k-1}, with D_0 = 1
};

WitnessSeries witness_series(const SpinBosonModel& model, const Mat& rho_env,
                             const std::vector<Mat>& gates, bool markovian);

/// Per-circuit witness series for n_circuits seeded random circuits.
std::vector<WitnessSeries> witness_histogram(const SpinBosonModel& model, const Mat& rho_env,
                                             int n_circuits, int depth, Gateset gateset,
                                             std::uint64_t seed, bool markovian);

/// Mixed-state fidelity between the two orthogonally seeded evolutions at
/// each step.
std::vector<double> mixed_fidelity_series(const SpinBosonModel& model, const Mat& rho_env,
                                          const std::vector<Mat>& gates);

/// Worker count: RBSIM_THREADS if set, else hardware concurrency.
unsigned worker_count();

}  // namespace rbsim::montecarlo
