// spin_boson.hpp — Block-diagonal spin-boson model: projector-labelled bath
// Hamiltonians H_p, their evolution blocks, and the joint step unitary.

#pragma once

#include <vector>

#include "rbsim/fock.hpp"

namespace rbsim::spin_boson {

using fock::EnvSpace;
using fock::Mat;

/// Projector label p in {0,1}^n, packed as a bitmask (bit j = qubit j).
using ProjectorLabel = unsigned;

/// n qubits coupled through sigma_z to m truncated bosonic modes.
/// g[i][j] couples mode i to qubit j; dt is the step duration.
struct SpinBosonModel {
    int n_qubits = 1;
    EnvSpace env;
    std::vector<std::vector<double>> g;  // g[mode][qubit]
    double dt = 0.1;

    Eigen::Index d() const { return Eigen::Index(1) << n_qubits; }

    /// Single qubit, single mode, scalar coupling.
    static SpinBosonModel single_qubit(double g, double omega, int cutoff, double dt);
};

void validate(const SpinBosonModel& model);

/// w(p) = sum_j (-1)^{p_j}, range [-n, n].
int weight(ProjectorLabel p, int n_qubits);

/// H_p = sum_i omega_i n_i + sum_i (sum_j g[i][j] (-1)^{p_j}) x_i
Mat block_hamiltonian(const SpinBosonModel& model, ProjectorLabel p);

/// All 2^n evolution blocks E_p = e^{-i H_p dt}, indexed by label.
struct EvolutionBlocks {
    std::vector<Mat> E;
};

EvolutionBlocks evolution_blocks(const SpinBosonModel& model);

/// sum_p |p><p| (x) E_p on system (x) env.
Mat joint_step_unitary(const SpinBosonModel& model);
Mat joint_step_unitary(const SpinBosonModel& model, const EvolutionBlocks& blocks);

/// cos((H_0 - H_1) dt); single-qubit only.
Mat delta_cos_op(const SpinBosonModel& model);

}  // namespace rbsim::spin_boson
