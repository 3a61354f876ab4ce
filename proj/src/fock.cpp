#include "rbsim/fock.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbsim::fock {

void validate(const ModeSpec& m) {
    if (!(m.omega > 0)) throw std::invalid_argument("ModeSpec: omega must be > 0");
    if (m.cutoff < 1) throw std::invalid_argument("ModeSpec: cutoff must be >= 1");
}

void validate(const EnvSpace& s) {
    if (s.modes.empty()) throw std::invalid_argument("EnvSpace: needs at least one mode");
    for (const auto& m : s.modes)
        if (m.cutoff < 1) throw std::invalid_argument("EnvSpace: cutoff must be >= 1");
    if (s.dim() < 2) throw std::invalid_argument("EnvSpace: dim must be >= 2");
}

Mat kron(const Mat& A, const Mat& B) {
    Mat C(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            C.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return C;
}

ModeOps build_mode_ops(int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("build_mode_ops: cutoff must be >= 1");
    const Eigen::Index dim = cutoff + 1;
    Mat a = Mat::Zero(dim, dim);
    for (Eigen::Index k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(double(k));
    Mat n = a.adjoint() * a;
    Mat x = a + a.adjoint();
    return {std::move(a), std::move(n), std::move(x)};
}

Mat thermal_state(const ModeSpec& mode, double beta) {
    if (!(beta > 0)) throw std::invalid_argument("thermal_state: beta must be > 0");
    const Eigen::Index dim = mode.cutoff + 1;
    Mat rho = Mat::Zero(dim, dim);
    if (std::isinf(beta)) {
        rho(0, 0) = 1.0;
        return rho;
    }
    double z = 0;
    for (Eigen::Index k = 0; k < dim; ++k) z += std::exp(-beta * mode.omega * double(k));
    for (Eigen::Index k = 0; k < dim; ++k)
        rho(k, k) = std::exp(-beta * mode.omega * double(k)) / z;
    return rho;
}

Mat thermal_state(const EnvSpace& space, double beta) {
    validate(space);
    Mat rho = thermal_state(space.modes[0], beta);
    for (std::size_t i = 1; i < space.modes.size(); ++i)
        rho = kron(rho, thermal_state(space.modes[i], beta));
    return rho;
}

Mat tensor_embed(const Mat& op, std::size_t mode_index, const EnvSpace& space) {
    if (mode_index >= space.modes.size())
        throw std::invalid_argument("tensor_embed: mode index out of range");
    if (op.rows() != space.mode_dim(mode_index) || op.cols() != space.mode_dim(mode_index))
        throw std::invalid_argument("tensor_embed: operator dimension mismatch");
    Mat out = op;
    for (std::size_t i = mode_index; i-- > 0;)
        out = kron(Mat::Identity(space.mode_dim(i), space.mode_dim(i)), out);
    for (std::size_t i = mode_index + 1; i < space.modes.size(); ++i)
        out = kron(out, Mat::Identity(space.mode_dim(i), space.mode_dim(i)));
    return out;
}

Mat total_number_op(const EnvSpace& space) {
    Mat n = Mat::Zero(space.dim(), space.dim());
    for (std::size_t i = 0; i < space.modes.size(); ++i)
        n += tensor_embed(build_mode_ops(space.modes[i].cutoff).n, i, space);
    return n;
}

Mat herm_func(const Mat& H, const std::function<cd(double)>& f, double herm_tol) {
    if (H.rows() != H.cols()) throw std::invalid_argument("herm_func: matrix not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::invalid_argument("herm_func: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Eigen::VectorXcd fl(H.rows());
    for (Eigen::Index i = 0; i < H.rows(); ++i) fl(i) = f(es.eigenvalues()(i));
    return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm_herm(const Mat& H, double t) {
    return herm_func(H, [t](double l) { return std::exp(cd(0, -t * l)); });
}

Mat partial_trace(const Mat& joint, Eigen::Index d_sys, Eigen::Index d_env, Keep keep) {
    if (joint.rows() != d_sys * d_env || joint.cols() != d_sys * d_env)
        throw std::invalid_argument("partial_trace: dimension does not factor as d_sys * d_env");
    if (keep == Keep::System) {
        Mat out = Mat::Zero(d_sys, d_sys);
        for (Eigen::Index i = 0; i < d_sys; ++i)
            for (Eigen::Index j = 0; j < d_sys; ++j)
                out(i, j) = joint.block(i * d_env, j * d_env, d_env, d_env).trace();
        return out;
    }
    Mat out = Mat::Zero(d_env, d_env);
    for (Eigen::Index i = 0; i < d_sys; ++i)
        out += joint.block(i * d_env, i * d_env, d_env, d_env);
    return out;
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance: shape mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho - sigma);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double mixed_fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("mixed_fidelity: shape mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("mixed_fidelity: state has negative eigenvalues");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Mat sqrt_rho = es.eigenvectors() * ev.cwiseSqrt().asDiagonal().toDenseMatrix().cast<cd>() *
                   es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es2(sqrt_rho * sigma * sqrt_rho);
    double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

}  // namespace rbsim::fock
