#include "rbsim/montecarlo.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace rbsim::montecarlo {

using fock::cd;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t depth_index,
                            std::uint64_t sample_index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ depth_index) ^ sample_index);
}

unsigned worker_count() {
    if (const char* env = std::getenv("RBSIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

Mat haar_unitary(int d, std::mt19937_64& rng) {
    if (d < 2) throw std::invalid_argument("haar_unitary: d must be >= 2");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qr(z);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the distribution is exactly Haar.
    for (int j = 0; j < d; ++j) {
        cd r = R(j, j);
        Q.col(j) *= r / std::abs(r);
    }
    return Q;
}

namespace {

Mat sigma_x() {
    Mat X(2, 2);
    X << 0, 1, 1, 0;
    return X;
}

bool equal_up_to_phase(const Mat& A, const Mat& B) {
    cd ip = (A.adjoint() * B).trace();
    if (std::abs(ip) < 1e-9) return false;
    cd phase = ip / std::abs(ip);
    return (A * phase - B).cwiseAbs().maxCoeff() < 1e-9;
}

}  // namespace

const std::vector<Mat>& clifford_1q_table() {
    static const std::vector<Mat> table = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Mat H(2, 2), S(2, 2);
        H << s, s, s, -s;
        S << 1, 0, 0, cd(0, 1);
        std::vector<Mat> group{Mat::Identity(2, 2)};
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Mat> current = group;
            for (const Mat& g : current) {
                for (const Mat* gen : {&H, &S}) {
                    Mat cand = *gen * g;
                    bool known = false;
                    for (const Mat& m : group)
                        if (equal_up_to_phase(cand, m)) {
                            known = true;
                            break;
                        }
                    if (!known) {
                        group.push_back(cand);
                        grew = true;
                    }
                }
            }
        }
        if (group.size() != 24)
            throw std::logic_error("clifford_1q_table: generation produced wrong group size");
        return group;
    }();
    return table;
}

GateSequence sample_sequence(int d, int depth, Gateset gateset, std::mt19937_64& rng) {
    GateSequence seq;
    seq.gates.reserve(depth);
    Mat product = Mat::Identity(d, d);
    for (int i = 0; i < depth; ++i) {
        Mat U;
        switch (gateset) {
            case Gateset::Haar:
                U = haar_unitary(d, rng);
                break;
            case Gateset::Clifford1q: {
                if (d != 2)
                    throw std::invalid_argument("sample_sequence: clifford1q needs d = 2");
                std::uniform_int_distribution<std::size_t> pick(0, 23);
                U = clifford_1q_table()[pick(rng)];
                break;
            }
            case Gateset::XI: {
                if (d != 2) throw std::invalid_argument("sample_sequence: xi needs d = 2");
                std::uniform_int_distribution<int> bit(0, 1);
                U = bit(rng) ? sigma_x() : Mat::Identity(2, 2);
                break;
            }
        }
        product = U * product;
        seq.gates.push_back(std::move(U));
    }
    seq.inverse = product.adjoint();
    return seq;
}

namespace {

struct JointEvolver {
    const SpinBosonModel& model;
    Mat step;
    Eigen::Index d, D;
    Mat rho_env;
    bool markovian;

    JointEvolver(const SpinBosonModel& m, const Mat& env, bool mark)
        : model(m),
          step(spin_boson::joint_step_unitary(m)),
          d(m.d()),
          D(m.env.dim()),
          rho_env(env),
          markovian(mark) {}

    void apply_gate(Mat& joint, const Mat& U) const {
        Mat lifted = fock::kron(U, Mat::Identity(D, D));
        joint = lifted * joint * lifted.adjoint();
    }

    void apply_step(Mat& joint) const {
        joint = step * joint * step.adjoint();
        if (markovian) {
            Mat sys = fock::partial_trace(joint, d, D, fock::Keep::System);
            joint = fock::kron(sys, rho_env);
        }
    }
};

}  // namespace

std::pair<Mat, Mat> simulate_sequence(const SpinBosonModel& model, const Mat& rho_s,
                                      const Mat& rho_env, const GateSequence& seq,
                                      bool markovian) {
    if (rho_s.rows() != model.d() || rho_env.rows() != model.env.dim())
        throw std::invalid_argument("simulate_sequence: dimension mismatch");
    JointEvolver ev(model, rho_env, markovian);
    Mat joint = fock::kron(rho_s, rho_env);
    for (const Mat& U : seq.gates) {
        ev.apply_gate(joint, U);
        ev.apply_step(joint);
    }
    if (!seq.gates.empty()) ev.apply_gate(joint, seq.inverse);
    return {fock::partial_trace(joint, ev.d, ev.D, fock::Keep::System),
            fock::partial_trace(joint, ev.d, ev.D, fock::Keep::Env)};
}

DecayCurve estimate_decay(const SpinBosonModel& model, const Mat& rho_s, const Mat& rho_env,
                          const SimConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("estimate_decay: samples must be >= 1");
    if (cfg.depths.empty()) throw std::invalid_argument("estimate_decay: depths empty");
    const int d = int(model.d());

    DecayCurve curve;
    curve.depths = cfg.depths;
    std::vector<std::vector<double>> survivals(cfg.depths.size(),
                                               std::vector<double>(cfg.samples));

    const unsigned workers = worker_count();
    auto run_samples = [&](unsigned tid) {
        for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
            const int depth = cfg.depths[di];
            for (int si = int(tid); si < cfg.samples; si += int(workers)) {
                if (depth == 0) {
                    survivals[di][std::size_t(si)] = 1.0;
                    continue;
                }
                std::mt19937_64 rng(derive_stream(cfg.seed, di, std::uint64_t(si)));
                GateSequence seq = sample_sequence(d, depth, cfg.gateset, rng);
                auto [sys, env] = simulate_sequence(model, rho_s, rho_env, seq, cfg.markovian);
                survivals[di][std::size_t(si)] = (sys * rho_s).trace().real();
            }
        }
    };
    if (workers == 1) {
        run_samples(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run_samples, t);
        for (auto& th : pool) th.join();
    }

    for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
        double mean = 0;
        for (double v : survivals[di]) mean += v;
        mean /= cfg.samples;
        double var = 0;
        for (double v : survivals[di]) var += (v - mean) * (v - mean);
        const double se =
            cfg.samples > 1 ? std::sqrt(var / (cfg.samples * (cfg.samples - 1.0))) : 0.0;
        curve.values.push_back(mean);
        curve.stderrs.push_back(se);
    }
    return curve;
}

int xi_phase_factor(const std::vector<int>& u) {
    int f = 0;
    for (auto it = u.rbegin(); it != u.rend(); ++it) f = (*it ? -1 : 1) * (1 + f);
    return f;
}

double xi_exact_average(const SpinBosonModel& model, const Mat& rho_env, int k, int k_limit) {
    if (model.n_qubits != 1)
        throw std::invalid_argument("xi_exact_average: single-qubit only");
    if (k > k_limit) throw std::invalid_argument("xi_exact_average: depth exceeds cost guard");
    const Eigen::Index D = model.env.dim();
    Mat plus(2, 1);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Mat rho_plus = plus * plus.adjoint();
    JointEvolver ev(model, rho_env, false);
    Mat X = sigma_x();
    Mat I2 = Mat::Identity(2, 2);

    double total = 0;
    const unsigned long long strings = 1ull << k;
    for (unsigned long long u = 0; u < strings; ++u) {
        Mat joint = fock::kron(rho_plus, rho_env);
        for (int j = 0; j < k; ++j) {
            ev.apply_gate(joint, (u >> j) & 1ull ? X : I2);
            ev.apply_step(joint);
        }
        Mat sys = fock::partial_trace(joint, 2, D, fock::Keep::System);
        total += (sys * rho_plus).trace().real();
    }
    return total / double(strings);
}

WitnessSeries witness_series(const SpinBosonModel& model, const Mat& rho_env,
                             const std::vector<Mat>& gates, bool markovian) {
    const Eigen::Index d = model.d();
    const Eigen::Index D = model.env.dim();
    JointEvolver ev(model, rho_env, markovian);

    Mat rho0 = Mat::Zero(d, d);
    rho0(0, 0) = 1;
    Mat rho1 = Mat::Zero(d, d);
    rho1(1, 1) = 1;
    Mat j0 = fock::kron(rho0, rho_env);
    Mat j1 = fock::kron(rho1, rho_env);

    WitnessSeries out;
    out.depths.push_back(0);
    out.D.push_back(1.0);
    out.deltaD.push_back(0.0);
    int depth = 0;
    for (const Mat& U : gates) {
        ev.apply_gate(j0, U);
        ev.apply_step(j0);
        ev.apply_gate(j1, U);
        ev.apply_step(j1);
        ++depth;
        Mat s0 = fock::partial_trace(j0, d, D, fock::Keep::System);
        Mat s1 = fock::partial_trace(j1, d, D, fock::Keep::System);
        const double dist = fock::trace_distance(s0, s1);
        out.depths.push_back(depth);
        out.deltaD.push_back(dist - out.D.back());
        out.D.push_back(dist);
    }
    return out;
}

std::vector<WitnessSeries> witness_histogram(const SpinBosonModel& model, const Mat& rho_env,
                                             int n_circuits, int depth, Gateset gateset,
                                             std::uint64_t seed, bool markovian) {
    if (n_circuits < 1) throw std::invalid_argument("witness_histogram: n_circuits must be >= 1");
    std::vector<WitnessSeries> all{std::size_t(n_circuits)};
    const int d = int(model.d());

    const unsigned workers = worker_count();
    auto run = [&](unsigned tid) {
        for (int c = int(tid); c < n_circuits; c += int(workers)) {
            std::mt19937_64 rng(derive_stream(seed, 0, std::uint64_t(c)));
            GateSequence seq = sample_sequence(d, depth, gateset, rng);
            all[std::size_t(c)] = witness_series(model, rho_env, seq.gates, markovian);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }
    return all;
}

std::vector<double> mixed_fidelity_series(const SpinBosonModel& model, const Mat& rho_env,
                                          const std::vector<Mat>& gates) {
    const Eigen::Index d = model.d();
    const Eigen::Index D = model.env.dim();
    JointEvolver ev(model, rho_env, false);

    Mat rho0 = Mat::Zero(d, d);
    rho0(0, 0) = 1;
    Mat rho1 = Mat::Zero(d, d);
    rho1(1, 1) = 1;
    Mat j0 = fock::kron(rho0, rho_env);
    Mat j1 = fock::kron(rho1, rho_env);

    std::vector<double> out{0.0};  // F_0 = 0 for orthogonal pure inputs
    for (const Mat& U : gates) {
        ev.apply_gate(j0, U);
        ev.apply_step(j0);
        ev.apply_gate(j1, U);
        ev.apply_step(j1);
        Mat s0 = fock::partial_trace(j0, d, D, fock::Keep::System);
        Mat s1 = fock::partial_trace(j1, d, D, fock::Keep::System);
        out.push_back(fock::mixed_fidelity(s0, s1));
    }
    return out;
}

}  // namespace rbsim::montecarlo
