#include "rbsim/verify.hpp"

#include <cmath>
#include <random>

#include "rbsim/avg_channel.hpp"
#include "rbsim/fock.hpp"
#include "rbsim/montecarlo.hpp"
#include "rbsim/spin_boson.hpp"

namespace rbsim::verify {

namespace {

using fock::Mat;
using spin_boson::SpinBosonModel;
namespace avg = rbsim::avg_channel;
namespace mc = rbsim::montecarlo;

void add(std::vector<Check>& checks, const std::string& name, double tol, double observed) {
    checks.push_back({name, tol, observed, observed <= tol});
}

Mat ground(Eigen::Index dim) {
    Mat rho = Mat::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return rho;
}

Mat random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = fock::cd(gauss(rng), gauss(rng));
    Mat rho = z * z.adjoint();
    return rho / rho.trace();
}

}  // namespace

std::vector<Check> run_all() {
    std::vector<Check> checks;

    // Twirl coefficient trace law: c_id + c_keep = delta / d.
    {
        double worst = 0;
        for (int d : {2, 4, 8}) {
            for (bool delta : {false, true}) {
                auto c = avg::twirl_coeffs(delta, d);
                worst = std::max(worst,
                                 std::abs(c.c_id + c.c_keep - (delta ? 1.0 : 0.0) / d));
            }
        }
        add(checks, "twirl_coeff_trace_law", 1e-14, worst);
    }

    // Single-qubit twirl coefficients against the Haar reference formula.
    {
        std::mt19937_64 rng(11);
        double worst = 0;
        Mat P0 = Mat::Zero(2, 2), P1 = Mat::Zero(2, 2);
        P0(0, 0) = 1;
        P1(1, 1) = 1;
        const Mat Ps[2] = {P0, P1};
        for (int rep = 0; rep < 5; ++rep) {
            Mat rho = random_density(2, rng);
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) {
                    auto c = avg::twirl_coeffs(p == q, 2);
                    Mat lhs = avg::haar_twirl_reference(Ps[p], Ps[q], rho, 2);
                    Mat rhs = c.c_id * rho.trace() * Mat::Identity(2, 2) / 2.0 +
                              c.c_keep * rho;
                    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
                }
        }
        add(checks, "single_qubit_twirl_vs_reference", 1e-12, worst);
    }

    // Layer propagation vs trajectory-sum oracle.
    {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 6, 0.1);
        Mat rho_env = ground(model.env.dim());
        Mat rho_s = ground(2);
        auto blocks = spin_boson::evolution_blocks(model);
        auto state = avg::initial_state(rho_env, 2);
        double worst = 0;
        for (int k = 1; k <= 4; ++k) {
            state = avg::propagate_layer(state, blocks);
            const double engine = avg::rb_output(state, rho_s);
            const double oracle = avg::trajectory_sum_fidelity(model, rho_env, k);
            worst = std::max(worst, std::abs(engine - oracle));
        }
        add(checks, "propagate_vs_trajectory_sum", 1e-9, worst);
    }

    // Markovian refresh engine vs closed form in the commuting regime.
    {
        SpinBosonModel model;
        model.n_qubits = 1;
        model.env = fock::EnvSpace::single(1e-9, 10);  // omega -> 0: blocks commute
        model.g = {{4.0}};
        model.dt = 0.1;
        Mat rho_env = ground(model.env.dim());
        Mat rho_s = ground(2);
        auto blocks = spin_boson::evolution_blocks(model);
        auto state = avg::initial_state(rho_env, 2);
        double worst = 0;
        for (int k = 1; k <= 50; ++k) {
            state = avg::refresh_env(avg::propagate_layer(state, blocks), rho_env);
            worst = std::max(worst, std::abs(avg::rb_output(state, rho_s) -
                                             avg::markovian_fidelity_closed(model, rho_env, k)));
        }
        add(checks, "markovian_engine_vs_closed_form", 1e-10, worst);
    }

    // XI closed form vs exhaustive enumeration in the commuting regime.
    {
        SpinBosonModel model;
        model.n_qubits = 1;
        model.env = fock::EnvSpace::single(1e-9, 8);
        model.g = {{4.0}};
        model.dt = 0.1;
        Mat rho_env = ground(model.env.dim());
        double worst = 0;
        for (int k : {1, 4, 8}) {
            worst = std::max(worst, std::abs(avg::xi_fidelity_closed(model, rho_env, k) -
                                             mc::xi_exact_average(model, rho_env, k)));
        }
        add(checks, "xi_closed_vs_enumeration", 1e-9, worst);
    }

    // Photon engine vs diagonal-trajectory brute force.
    {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 6, 0.1);
        Mat rho_env = ground(model.env.dim());
        double worst = 0;
        for (int k : {1, 3, 6}) {
            worst = std::max(worst, std::abs(avg::avg_photon_efficient(model, rho_env, k) -
                                             avg::avg_photon_bruteforce(model, rho_env, k)));
        }
        add(checks, "photon_efficient_vs_bruteforce", 1e-9, worst);
    }

    // Clifford table size and closure under products.
    {
        const auto& table = mc::clifford_1q_table();
        double bad = table.size() == 24 ? 0.0 : 1.0;
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::size_t> pick(0, 23);
        for (int rep = 0; rep < 50 && bad == 0.0; ++rep) {
            Mat prod = table[pick(rng)] * table[pick(rng)];
            bool found = false;
            for (const auto& m : table) {
                fock::cd ip = (m.adjoint() * prod).trace();
                if (std::abs(ip) < 1e-9) continue;
                if ((prod - (ip / std::abs(ip)) * m).cwiseAbs().maxCoeff() < 1e-8) {
                    found = true;
                    break;
                }
            }
            if (!found) bad = 1.0;
        }
        add(checks, "clifford_table_size_and_closure", 0.5, bad);
    }

    // Monte-Carlo estimate vs exact averaged curve, 3 standard errors.
    {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
        Mat rho_env = ground(model.env.dim());
        Mat rho_s = ground(2);
        mc::SimConfig cfg;
        cfg.samples = 400;
        cfg.depths = {1, 5, 10};
        cfg.seed = 20240815;
        cfg.gateset = mc::Gateset::Clifford1q;
        auto est = mc::estimate_decay(model, rho_s, rho_env, cfg);
        auto exact = avg::rb_decay(model, rho_s, rho_env, cfg.depths,
                                   avg::Mode::NonMarkovian);
        double worst = 0;
        for (std::size_t i = 0; i < est.values.size(); ++i) {
            const double se = std::max(est.stderrs[i], 1e-12);
            worst = std::max(worst, std::abs(est.values[i] - exact.values[i]) / (3.0 * se));
        }
        add(checks, "montecarlo_vs_exact_3sigma", 1.0, worst);
    }

    // Haar sampler second moment vs the reference twirl formula.
    {
        std::mt19937_64 rng(17);
        Mat A = random_density(2, rng) * 2.0;
        Mat B = random_density(2, rng) * 2.0;
        Mat rho = random_density(2, rng);
        Mat ref = avg::haar_twirl_reference(A, B, rho, 2);
        const int samples = 20000;
        Mat mean = Mat::Zero(2, 2);
        Mat m2 = Mat::Zero(2, 2);  // accumulates |term|^2 entrywise
        std::mt19937_64 srng(99);
        for (int s = 0; s < samples; ++s) {
            Mat U = mc::haar_unitary(2, srng);
            Mat term = U.adjoint() * A * U * rho * U.adjoint() * B * U;
            mean += term;
            m2 += term.cwiseProduct(term.conjugate()).real().cast<fock::cd>();
        }
        mean /= samples;
        double worst = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double var =
                    std::max(m2(i, j).real() / samples - std::norm(mean(i, j)), 1e-18);
                const double se = std::sqrt(var / samples);
                worst = std::max(worst, std::abs(mean(i, j) - ref(i, j)) / (3.0 * se));
            }
        add(checks, "haar_second_moment_3sigma", 1.0, worst);
    }

    // Markovian witness monotonicity.
    {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
        Mat rho_env = ground(model.env.dim());
        auto series = mc::witness_histogram(model, rho_env, 20, 15,
                                            mc::Gateset::Clifford1q, 5, true);
        double worst = 0;
        for (const auto& s : series)
            for (std::size_t k = 1; k < s.deltaD.size(); ++k)
                worst = std::max(worst, s.deltaD[k]);
        add(checks, "markovian_witness_monotone", 1e-10, worst);
    }

    // Non-Markovian backflow is observed.
    {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
        Mat rho_env = ground(model.env.dim());
        auto series = mc::witness_histogram(model, rho_env, 20, 15,
                                            mc::Gateset::Clifford1q, 5, false);
        int positive = 0;
        for (const auto& s : series)
            for (std::size_t k = 1; k < s.deltaD.size(); ++k)
                if (s.deltaD[k] > 1e-10) ++positive;
        add(checks, "nonmarkovian_backflow_present", 0.5, positive > 0 ? 0.0 : 1.0);
    }

    return checks;
}

}  // namespace rbsim::verify
