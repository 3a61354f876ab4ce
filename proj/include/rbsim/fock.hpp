// fock.hpp — Truncated bosonic Fock-space operators, states and metrics.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace rbsim::fock {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

/// A single bosonic mode: angular frequency and occupation cutoff N
/// (the truncated space has dimension N+1).
struct ModeSpec {
    double omega = 1.0;
    int cutoff = 1;

    bool operator==(const ModeSpec&) const = default;
};

/// Ordered list of modes. Mode 0 is the leftmost Kronecker factor.
struct EnvSpace {
    std::vector<ModeSpec> modes;

    Eigen::Index dim() const {
        Eigen::Index d = 1;
        for (const auto& m : modes) d *= m.cutoff + 1;
        return d;
    }
    Eigen::Index mode_dim(std::size_t i) const { return modes.at(i).cutoff + 1; }

    static EnvSpace single(double omega, int cutoff) { return EnvSpace{{{omega, cutoff}}}; }
};

void validate(const ModeSpec& m);
void validate(const EnvSpace& s);

/// Kronecker product, row-major ordering (left factor is the slow index).
Mat kron(const Mat& A, const Mat& B);

struct ModeOps {
    Mat a;  // annihilation, a[k-1,k] = sqrt(k)
    Mat n;  // number, diag(0..cutoff)
    Mat x;  // a + a†
};

ModeOps build_mode_ops(int cutoff);

/// Thermal state of one mode: diag(e^{-beta omega k}) renormalized after
/// truncation. beta = +inf gives the ground state.
Mat thermal_state(const ModeSpec& mode, double beta);

/// Product thermal state over all modes of a space.
Mat thermal_state(const EnvSpace& space, double beta);

/// Lift a single-mode operator to the full space (identity elsewhere).
Mat tensor_embed(const Mat& op, std::size_t mode_index, const EnvSpace& space);

/// Total number operator sum_i a_i† a_i on the full space.
Mat total_number_op(const EnvSpace& space);

/// Apply a scalar function on the spectrum of a Hermitian matrix: V f(L) V†.
Mat herm_func(const Mat& H, const std::function<cd(double)>& f, double herm_tol = 1e-10);

/// e^{-i t H} for Hermitian H.
Mat expm_herm(const Mat& H, double t);

enum class Keep { System, Env };

/// Partial trace of an operator on system (x) env.
Mat partial_trace(const Mat& joint, Eigen::Index d_sys, Eigen::Index d_env, Keep keep);

/// (1/2) sum |eig(rho - sigma)|
double trace_distance(const Mat& rho, const Mat& sigma);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double mixed_fidelity(const Mat& rho, const Mat& sigma);

}  // namespace rbsim::fock
