#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rbsim/avg_channel.hpp"
#include "rbsim/montecarlo.hpp"

using namespace rbsim;
using namespace rbsim::montecarlo;
using fock::Mat;
using fock::cd;
using spin_boson::SpinBosonModel;
using Catch::Approx;

namespace {

Mat ground(Eigen::Index dim) {
    Mat rho = Mat::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return rho;
}

}  // namespace

TEST_CASE("haar_unitary is unitary and first-moment correct") {
    std::mt19937_64 rng(1);
    for (int d : {2, 3, 4}) {
        Mat U = haar_unitary(d, rng);
        REQUIRE((U.adjoint() * U - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("E[U rho U†] approaches I/d") {
        const int samples = 20000;
        Mat rho = Mat::Zero(2, 2);
        rho(0, 0) = 1;
        Mat mean = Mat::Zero(2, 2);
        std::mt19937_64 srng(12);
        for (int s = 0; s < samples; ++s) {
            Mat U = haar_unitary(2, srng);
            mean += U * rho * U.adjoint();
        }
        mean /= samples;
        // entry variance is O(1); 3 sigma with a generous constant
        const double band = 3.0 / std::sqrt(double(samples));
        REQUIRE((mean - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < band);
    }
}

TEST_CASE("clifford_1q_table") {
    const auto& table = clifford_1q_table();
    REQUIRE(table.size() == 24);

    SECTION("closure under products, up to phase") {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<std::size_t> pick(0, 23);
        for (int rep = 0; rep < 100; ++rep) {
            Mat prod = table[pick(rng)] * table[pick(rng)];
            bool found = false;
            for (const auto& m : table) {
                cd ip = (m.adjoint() * prod).trace();
                if (std::abs(ip) < 1e-9) continue;
                if ((prod - (ip / std::abs(ip)) * m).cwiseAbs().maxCoeff() < 1e-9) {
                    found = true;
                    break;
                }
            }
            REQUIRE(found);
        }
    }
    SECTION("uniform sampling reproduces the single-qubit twirl coefficients") {
        // Clifford is a 2-design: the exact average over the 24 elements of
        // U† P0 U rho U† P1 U must equal the coefficient form.
        Mat P0 = Mat::Zero(2, 2), P1 = Mat::Zero(2, 2);
        P0(0, 0) = 1;
        P1(1, 1) = 1;
        Mat rho(2, 2);
        rho << 0.7, cd(0.1, -0.2), cd(0.1, 0.2), 0.3;
        Mat avg01 = Mat::Zero(2, 2), avg00 = Mat::Zero(2, 2);
        for (const auto& U : table) {
            avg01 += U.adjoint() * P0 * U * rho * U.adjoint() * P1 * U;
            avg00 += U.adjoint() * P0 * U * rho * U.adjoint() * P0 * U;
        }
        avg01 /= 24.0;
        avg00 /= 24.0;
        REQUIRE((avg01 - avg_channel::haar_twirl_reference(P0, P1, rho, 2))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
        REQUIRE((avg00 - avg_channel::haar_twirl_reference(P0, P0, rho, 2))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
    }
}

TEST_CASE("sample_sequence inverse undoes the gates") {
    std::mt19937_64 rng(8);
    for (auto gateset : {Gateset::Haar, Gateset::Clifford1q, Gateset::XI}) {
        auto seq = sample_sequence(2, 6, gateset, rng);
        Mat prod = Mat::Identity(2, 2);
        for (const auto& U : seq.gates) prod = U * prod;
        REQUIRE((seq.inverse * prod - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("simulate_sequence") {
    auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
    Mat rho_env = ground(model.env.dim());
    Mat rho_s = ground(2);

    SECTION("empty sequence returns rho_s") {
        GateSequence empty;
        auto [sys, env] = simulate_sequence(model, rho_s, rho_env, empty, false);
        REQUIRE((sys - rho_s).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("g = 0: survival 1 for any sequence") {
        auto free = SpinBosonModel::single_qubit(0.0, 10.0, 8, 0.1);
        std::mt19937_64 rng(3);
        auto seq = sample_sequence(2, 5, Gateset::Haar, rng);
        auto [sys, env] = simulate_sequence(free, rho_s, rho_env, seq, false);
        REQUIRE((sys * rho_s).trace().real() == Approx(1.0).margin(1e-10));
    }
    SECTION("deterministic for a fixed seed") {
        std::mt19937_64 rng1(derive_stream(42, 0, 0)), rng2(derive_stream(42, 0, 0));
        auto s1 = sample_sequence(2, 4, Gateset::Haar, rng1);
        auto s2 = sample_sequence(2, 4, Gateset::Haar, rng2);
        auto [sys1, e1] = simulate_sequence(model, rho_s, rho_env, s1, false);
        auto [sys2, e2] = simulate_sequence(model, rho_s, rho_env, s2, false);
        REQUIRE((sys1 - sys2).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("joint state stays physical") {
        std::mt19937_64 rng(6);
        auto seq = sample_sequence(2, 8, Gateset::Clifford1q, rng);
        for (bool markovian : {false, true}) {
            auto [sys, env] = simulate_sequence(model, rho_s, rho_env, seq, markovian);
            REQUIRE(sys.trace().real() == Approx(1.0).margin(1e-10));
            Eigen::SelfAdjointEigenSolver<Mat> es(sys);
            REQUIRE(es.eigenvalues().minCoeff() > -1e-8);
        }
    }
}

TEST_CASE("estimate_decay") {
    auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
    Mat rho_env = ground(model.env.dim());
    Mat rho_s = ground(2);

    SimConfig cfg;
    cfg.samples = 300;
    cfg.depths = {0, 1, 5};
    cfg.seed = 77;
    cfg.gateset = Gateset::Clifford1q;

    auto curve = estimate_decay(model, rho_s, rho_env, cfg);
    SECTION("depth 0 is exact") {
        REQUIRE(curve.values[0] == 1.0);
        REQUIRE(curve.stderrs[0] == 0.0);
    }
    SECTION("agrees with the exact averaged curve within 3 sigma") {
        auto exact = avg_channel::rb_decay(model, rho_s, rho_env, cfg.depths,
                                           avg_channel::Mode::NonMarkovian);
        for (std::size_t i = 1; i < curve.values.size(); ++i)
            REQUIRE(std::abs(curve.values[i] - exact.values[i]) <=
                    3.0 * curve.stderrs[i] + 1e-12);
    }
    SECTION("reproducible and independent of worker split") {
        auto again = estimate_decay(model, rho_s, rho_env, cfg);
        for (std::size_t i = 0; i < curve.values.size(); ++i)
            REQUIRE(curve.values[i] == again.values[i]);
    }
    SECTION("standard error scales as 1/sqrt(samples)") {
        auto cfg2 = cfg;
        cfg2.samples = 4 * cfg.samples;
        cfg2.seed = 78;
        auto curve2 = estimate_decay(model, rho_s, rho_env, cfg2);
        // quadrupling samples should roughly halve the error bar
        REQUIRE(curve2.stderrs[2] < 0.75 * curve.stderrs[2]);
        REQUIRE(curve2.stderrs[2] > 0.25 * curve.stderrs[2]);
    }
}

TEST_CASE("xi phase factor recursion") {
    REQUIRE(xi_phase_factor({0}) == 1);
    REQUIRE(xi_phase_factor({1}) == -1);
    REQUIRE(xi_phase_factor({1, 0}) == -2);
    REQUIRE(xi_phase_factor({0, 1}) == 0);
    REQUIRE(xi_phase_factor({0, 0, 0}) == 3);
}

TEST_CASE("xi_exact_average") {
    SECTION("commuting regime equals the closed form") {
        SpinBosonModel flat;
        flat.n_qubits = 1;
        flat.env = fock::EnvSpace::single(1e-9, 8);
        flat.g = {{4.0}};
        flat.dt = 0.1;
        Mat env = ground(9);
        for (int k : {1, 4, 8})
            REQUIRE(xi_exact_average(flat, env, k) ==
                    Approx(avg_channel::xi_fidelity_closed(flat, env, k)).margin(1e-9));
    }
    SECTION("omega = 10 shows a finite gap to the approximate closed form") {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
        Mat env = ground(9);
        const double gap =
            std::abs(xi_exact_average(model, env, 4) -
                     avg_channel::xi_fidelity_closed(model, env, 4));
        REQUIRE(gap > 1e-3);
    }
    SECTION("depth guard") {
        auto model = SpinBosonModel::single_qubit(4.0, 10.0, 4, 0.1);
        REQUIRE_THROWS_AS(xi_exact_average(model, ground(5), 15), std::invalid_argument);
    }
}

TEST_CASE("witness_series") {
    auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
    Mat rho_env = ground(model.env.dim());
    std::mt19937_64 rng(9);
    auto seq = sample_sequence(2, 12, Gateset::Clifford1q, rng);

    SECTION("D_0 = 1 for orthogonal inputs") {
        auto s = witness_series(model, rho_env, seq.gates, false);
        REQUIRE(s.D.front() == 1.0);
        for (double v : s.D) {
            REQUIRE(v >= -1e-12);
            REQUIRE(v <= 1.0 + 1e-12);
        }
    }
    SECTION("Markovian series is monotone non-increasing") {
        auto s = witness_series(model, rho_env, seq.gates, true);
        for (std::size_t k = 1; k < s.deltaD.size(); ++k) REQUIRE(s.deltaD[k] <= 1e-10);
    }
    SECTION("non-Markovian circuits show backflow somewhere") {
        auto all = witness_histogram(model, rho_env, 50, 12, Gateset::Clifford1q, 11, false);
        int positive = 0;
        for (const auto& s : all)
            for (std::size_t k = 1; k < s.deltaD.size(); ++k)
                if (s.deltaD[k] > 1e-10) ++positive;
        REQUIRE(positive > 0);
    }
    SECTION("fixed seed reproduces the histogram") {
        auto a = witness_histogram(model, rho_env, 10, 8, Gateset::Clifford1q, 21, false);
        auto b = witness_histogram(model, rho_env, 10, 8, Gateset::Clifford1q, 21, false);
        for (std::size_t c = 0; c < a.size(); ++c)
            for (std::size_t k = 0; k < a[c].D.size(); ++k)
                REQUIRE(a[c].D[k] == b[c].D[k]);
    }
}

TEST_CASE("mixed_fidelity_series") {
    auto model = SpinBosonModel::single_qubit(4.0, 10.0, 8, 0.1);
    Mat rho_env = ground(model.env.dim());
    std::mt19937_64 rng(14);
    auto seq = sample_sequence(2, 30, Gateset::Clifford1q, rng);
    auto F = mixed_fidelity_series(model, rho_env, seq.gates);
    auto W = witness_series(model, rho_env, seq.gates, false);

    REQUIRE(F.front() == 0.0);
    SECTION("Fuchs-van de Graaff bounds at every step") {
        for (std::size_t k = 0; k < F.size(); ++k) {
            const double D = W.D[k];
            REQUIRE(1.0 - std::sqrt(F[k]) <= D + 1e-9);
            REQUIRE(D <= std::sqrt(1.0 - F[k]) + 1e-9);
        }
    }
}

TEST_CASE("gateset 2-design equivalence") {
    auto model = SpinBosonModel::single_qubit(4.0, 10.0, 6, 0.1);
    Mat rho_env = ground(model.env.dim());
    Mat rho_s = ground(2);

    SimConfig cfg;
    cfg.samples = 500;
    cfg.depths = {3, 8};
    cfg.seed = 5;
    cfg.gateset = Gateset::Haar;
    auto haar = estimate_decay(model, rho_s, rho_env, cfg);
    cfg.gateset = Gateset::Clifford1q;
    cfg.seed = 6;
    auto cliff = estimate_decay(model, rho_s, rho_env, cfg);
    for (std::size_t i = 0; i < haar.values.size(); ++i) {
        const double se =
            std::sqrt(haar.stderrs[i] * haar.stderrs[i] + cliff.stderrs[i] * cliff.stderrs[i]);
        REQUIRE(std::abs(haar.values[i] - cliff.values[i]) <= 3.0 * se);
    }
}
