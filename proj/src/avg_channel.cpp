#include "rbsim/avg_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbsim::avg_channel {

TwirlCoeffs twirl_coeffs(bool delta, int d) {
    if (d < 2) throw std::invalid_argument("twirl_coeffs: d must be >= 2");
    const double dd = double(d);
    const double dl = delta ? 1.0 : 0.0;
    return {(dd * dl - 1.0) / (dd * dd - 1.0), (1.0 - dl / dd) / (dd * dd - 1.0)};
}

Mat haar_twirl_reference(const Mat& A, const Mat& B, const Mat& rho, int d) {
    const double dd = double(d);
    const fock::cd trAB = (A * B).trace();
    const fock::cd trA = A.trace();
    const fock::cd trB = B.trace();
    const fock::cd trR = rho.trace();
    Mat id = Mat::Identity(d, d);
    return (trAB * trR / dd) * (id / dd) +
           ((dd * trA * trB - trAB) / (dd * (dd * dd - 1.0))) * (rho - trR * id / dd);
}

AveragedState initial_state(const Mat& rho_env, int d) {
    return {Mat::Zero(rho_env.rows(), rho_env.cols()), rho_env, d};
}

AveragedState propagate_layer(const AveragedState& state, const EvolutionBlocks& blocks) {
    const std::size_t nblocks = blocks.E.size();
    if (std::size_t(state.d) != nblocks)
        throw std::invalid_argument("propagate_layer: block count does not match system dim");
    if (blocks.E[0].rows() != state.B_id.rows())
        throw std::invalid_argument("propagate_layer: environment dimension mismatch");

    const TwirlCoeffs same = twirl_coeffs(true, state.d);
    const TwirlCoeffs diff = twirl_coeffs(false, state.d);

    Mat B_id = Mat::Zero(state.B_id.rows(), state.B_id.cols());
    Mat B_rho = Mat::Zero(state.B_id.rows(), state.B_id.cols());
    for (std::size_t p = 0; p < nblocks; ++p) {
        for (std::size_t q = 0; q < nblocks; ++q) {
            const TwirlCoeffs& c = (p == q) ? same : diff;
            Mat Eq_dag = blocks.E[q].adjoint();
            Mat conj_id = blocks.E[p] * state.B_id * Eq_dag;
            Mat conj_rho = blocks.E[p] * state.B_rho * Eq_dag;
            B_id += (c.c_id + c.c_keep) * conj_id + c.c_id * conj_rho;
            B_rho += c.c_keep * conj_rho;
        }
    }
    return {std::move(B_id), std::move(B_rho), state.d};
}

double rb_output(const AveragedState& state, const Mat& rho_s) {
    const double purity = (rho_s * rho_s).trace().real();
    if (std::abs(purity - 1.0) > 1e-10)
        throw std::invalid_argument("rb_output: rho_s must be pure and normalized");
    return state.B_id.trace().real() / state.d + state.B_rho.trace().real() * purity;
}

AveragedState refresh_env(const AveragedState& state, const Mat& rho_env) {
    return {state.B_id.trace() * rho_env, state.B_rho.trace() * rho_env, state.d};
}

double markovian_fidelity_closed(const SpinBosonModel& model, const Mat& rho_env, int k) {
    if (model.n_qubits != 1)
        throw std::invalid_argument("markovian_fidelity_closed: single-qubit only");
    const double c = (spin_boson::delta_cos_op(model) * rho_env).trace().real();
    return 0.5 + 0.5 * std::pow((1.0 + 2.0 * c) / 3.0, k);
}

namespace {

// H(x) = E_{x_k} ... E_{x_1} for a base-2^n digit string packed little-endian
// in layers: layer j label = (code >> (j*n)) & (2^n - 1).
Mat trajectory_product(const EvolutionBlocks& blocks, unsigned long long code, int k, int n) {
    const unsigned mask = (1u << n) - 1u;
    Mat H = Mat::Identity(blocks.E[0].rows(), blocks.E[0].cols());
    for (int j = 0; j < k; ++j) H = blocks.E[(code >> (j * n)) & mask] * H;
    return H;
}

int hamming(unsigned long long p, unsigned long long q, int k, int n) {
    const unsigned long long mask = (1ull << n) - 1ull;
    int dist = 0;
    for (int j = 0; j < k; ++j)
        if (((p >> (j * n)) & mask) != ((q >> (j * n)) & mask)) ++dist;
    return dist;
}

}  // namespace

double trajectory_sum_fidelity(const SpinBosonModel& model, const Mat& rho_env, int k,
                               int k_limit) {
    if (k > k_limit)
        throw std::invalid_argument("trajectory_sum_fidelity: depth exceeds cost guard");
    if (k == 0) return 1.0;
    const int n = model.n_qubits;
    const double d = double(model.d());
    auto blocks = spin_boson::evolution_blocks(model);
    const unsigned long long total = 1ull << (n * k);

    std::vector<Mat> prods(total);
    for (unsigned long long p = 0; p < total; ++p)
        prods[p] = trajectory_product(blocks, p, k, n);

    double sum = 0;
    for (unsigned long long p = 0; p < total; ++p) {
        for (unsigned long long q = 0; q < total; ++q) {
            const int dist = hamming(p, q, k, n);
            const double w = std::pow(1.0 - 1.0 / d, 1 + k - dist);
            sum += w * (prods[p] * rho_env * prods[q].adjoint()).trace().real();
        }
    }
    return 1.0 / d + sum / std::pow(d * d - 1.0, k);
}

double xi_fidelity_closed(const SpinBosonModel& model, const Mat& rho_env, int k) {
    if (model.n_qubits != 1)
        throw std::invalid_argument("xi_fidelity_closed: single-qubit only");
    Mat diff = spin_boson::block_hamiltonian(model, 0) - spin_boson::block_hamiltonian(model, 1);
    const double dt = model.dt;
    // cos(2gxt)^k applied on the spectrum of H_0 - H_1
    Mat Ck = fock::herm_func(
        diff, [dt, k](double l) { return fock::cd(std::pow(std::cos(dt * l), k), 0); });
    return 0.5 + 0.5 * (Ck * rho_env).trace().real();
}

PhotonSeries photon_series(const SpinBosonModel& model, const Mat& rho_env,
                           const std::vector<int>& depths) {
    auto blocks = spin_boson::evolution_blocks(model);
    Mat n_op = fock::total_number_op(model.env);
    Mat n2_op = n_op * n_op;
    AveragedState state = initial_state(rho_env, int(model.d()));
    PhotonSeries out;
    int k = 0;
    for (int depth : depths) {
        for (; k < depth; ++k) state = propagate_layer(state, blocks);
        Mat env = state.B_id + state.B_rho;
        const double mean = (n_op * env).trace().real();
        const double second = (n2_op * env).trace().real();
        out.depths.push_back(depth);
        out.mean.push_back(mean);
        out.var.push_back(second - mean * mean);
    }
    return out;
}

double avg_photon_efficient(const SpinBosonModel& model, const Mat& rho_env, int k) {
    return photon_series(model, rho_env, {k}).mean.back();
}

double avg_photon_bruteforce(const SpinBosonModel& model, const Mat& rho_env, int k,
                             int k_limit) {
    if (k > k_limit)
        throw std::invalid_argument("avg_photon_bruteforce: depth exceeds cost guard");
    auto blocks = spin_boson::evolution_blocks(model);
    Mat n_op = fock::total_number_op(model.env);
    const int n = model.n_qubits;
    if (k == 0) return (n_op * rho_env).trace().real();
    const unsigned long long total = 1ull << (n * k);
    double sum = 0;
    for (unsigned long long p = 0; p < total; ++p) {
        Mat H = trajectory_product(blocks, p, k, n);
        sum += (n_op * H * rho_env * H.adjoint()).trace().real();
    }
    return sum / double(1ull << (n * k));
}

DecayCurve rb_decay(const SpinBosonModel& model, const Mat& rho_s, const Mat& rho_env,
                    const std::vector<int>& depths, Mode mode) {
    if (!std::is_sorted(depths.begin(), depths.end()))
        throw std::invalid_argument("rb_decay: depths must be ascending");
    DecayCurve curve;
    curve.depths = depths;
    if (mode == Mode::XI) {
        for (int k : depths) curve.values.push_back(xi_fidelity_closed(model, rho_env, k));
        return curve;
    }
    auto blocks = spin_boson::evolution_blocks(model);
    AveragedState state = initial_state(rho_env, int(model.d()));
    int k = 0;
    for (int depth : depths) {
        for (; k < depth; ++k) {
            state = propagate_layer(state, blocks);
            if (mode == Mode::Markovian) state = refresh_env(state, rho_env);
        }
        curve.values.push_back(rb_output(state, rho_s));
    }
    return curve;
}

}  // namespace rbsim::avg_channel
