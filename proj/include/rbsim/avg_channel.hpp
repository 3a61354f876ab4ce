// avg_channel.hpp — Exactly-averaged randomized-benchmarking computations:
// twirl coefficients, regrouped layer propagation, Markovian refresh, closed
// forms, trajectory-sum oracle, and bath photon statistics.

#pragma once

#include <vector>

#include "rbsim/curve.hpp"
#include "rbsim/spin_boson.hpp"

namespace rbsim::avg_channel {

using fock::Mat;
using spin_boson::EvolutionBlocks;
using spin_boson::SpinBosonModel;

/// Coefficients of one twirled layer: the averaged operator is
/// c_id tr(M) I/d + c_keep M, with delta = [p == q].
struct TwirlCoeffs {
    double c_id;
    double c_keep;
};

TwirlCoeffs twirl_coeffs(bool delta, int d);

/// E_U[U† A U rho U† B U] over the Haar measure; test oracle for the
/// coefficient form and for Monte-Carlo moment checks.
Mat haar_twirl_reference(const Mat& A, const Mat& B, const Mat& rho, int d);

/// Haar-averaged joint state regrouped onto the system span {I/d, rho_s}:
/// the full state is I/d (x) B_id + rho_s (x) B_rho.
struct AveragedState {
    Mat B_id;
    Mat B_rho;
    int d;
};

/// k = 0 state for initial environment rho_env.
AveragedState initial_state(const Mat& rho_env, int d);

/// One twirled interaction layer; 4^n environment-operator conjugations,
/// summed in lexicographic (p, q) order.
AveragedState propagate_layer(const AveragedState& state, const EvolutionBlocks& blocks);

/// Survival probability tr(E[rho_k^sys] rho_s) for pure rho_s.
double rb_output(const AveragedState& state, const Mat& rho_s);

/// Markovian reset: both environment operators replaced by their trace
/// times the fresh rho_env.
AveragedState refresh_env(const AveragedState& state, const Mat& rho_env);

/// 1/2 + 1/2 ((1 + 2 tr(cos(2gxt) rho_env)) / 3)^k. Single-qubit only.
/// Exact for commuting block Hamiltonians (omega = 0); approximate otherwise.
double markovian_fidelity_closed(const SpinBosonModel& model, const Mat& rho_env, int k);

/// Exponential-cost sum over all (p, q) trajectory pairs; oracle for the
/// layer propagation. Cost (2^n)^{2k}.
double trajectory_sum_fidelity(const SpinBosonModel& model, const Mat& rho_env, int k,
                               int k_limit = 6);

/// 1/2 + 1/2 tr(cos(2gxt)^k rho_env) (matrix power). Single-qubit only.
double xi_fidelity_closed(const SpinBosonModel& model, const Mat& rho_env, int k);

/// Photon statistics of the environment after each layer of the averaged
/// non-Markovian propagation.
struct PhotonSeries {
    std::vector<int> depths;
    std::vector<double> mean;
    std::vector<double> var;
};

PhotonSeries photon_series(const SpinBosonModel& model, const Mat& rho_env,
                           const std::vector<int>& depths);

double avg_photon_efficient(const SpinBosonModel& model, const Mat& rho_env, int k);

/// Diagonal-trajectory enumeration oracle for the photon number.
double avg_photon_bruteforce(const SpinBosonModel& model, const Mat& rho_env, int k,
                             int k_limit = 10);

enum class Mode { NonMarkovian, Markovian, XI };

/// Exact averaged decay curve for the requested mode.
DecayCurve rb_decay(const SpinBosonModel& model, const Mat& rho_s, const Mat& rho_env,
                    const std::vector<int>& depths, Mode mode);

}  // namespace rbsim::avg_channel
