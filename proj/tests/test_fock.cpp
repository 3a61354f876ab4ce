#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rbsim/fock.hpp"

using namespace rbsim::fock;
using Catch::Approx;

namespace {

Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Mat z(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cd(gauss(rng), gauss(rng));
    return (z + z.adjoint()) / 2.0;
}

Mat random_density(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Mat z(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cd(gauss(rng), gauss(rng));
    Mat rho = z * z.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("build_mode_ops smallest ladder") {
    auto ops = build_mode_ops(1);
    Mat a_ref(2, 2), x_ref(2, 2);
    a_ref << 0, 1, 0, 0;
    x_ref << 0, 1, 1, 0;
    REQUIRE((ops.a - a_ref).cwiseAbs().maxCoeff() == Approx(0).margin(1e-15));
    REQUIRE((ops.x - x_ref).cwiseAbs().maxCoeff() == Approx(0).margin(1e-15));
    REQUIRE(ops.n(0, 0).real() == Approx(0));
    REQUIRE(ops.n(1, 1).real() == Approx(1));
}

TEST_CASE("build_mode_ops entries and structure") {
    auto ops = build_mode_ops(2);
    REQUIRE(ops.a(1, 2).real() == Approx(std::sqrt(2.0)));

    for (int cutoff : {1, 3, 7}) {
        auto o = build_mode_ops(cutoff);
        REQUIRE((o.x - o.x.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        // n = a†a exactly, integer spectrum on the diagonal
        REQUIRE((o.n - o.a.adjoint() * o.a).cwiseAbs().maxCoeff() == 0.0);
        for (int k = 0; k <= cutoff; ++k) REQUIRE(o.n(k, k).real() == Approx(double(k)));
        // truncated [a, a†] = I except the last diagonal entry
        Mat comm = o.a * o.a.adjoint() - o.a.adjoint() * o.a;
        for (int k = 0; k < cutoff; ++k) REQUIRE(comm(k, k).real() == Approx(1.0));
        REQUIRE(comm(cutoff, cutoff).real() == Approx(1.0 - (cutoff + 1)));
    }
    REQUIRE_THROWS_AS(build_mode_ops(0), std::invalid_argument);
}

TEST_CASE("thermal_state") {
    SECTION("ground state at beta = inf") {
        auto rho = thermal_state({1.0, 5}, std::numeric_limits<double>::infinity());
        REQUIRE(rho(0, 0).real() == Approx(1.0));
        auto n = build_mode_ops(5).n;
        REQUIRE((n * rho).trace().real() == Approx(0.0).margin(1e-15));
    }
    SECTION("finite-sum occupation at beta*omega = ln 2, cutoff 10") {
        // oracle: <n> = sum k e^{-bwk} / sum e^{-bwk}, truncated geometric sums
        const double bw = std::log(2.0);
        double num = 0, den = 0;
        for (int k = 0; k <= 10; ++k) {
            num += k * std::exp(-bw * k);
            den += std::exp(-bw * k);
        }
        auto rho = thermal_state({1.0, 10}, bw);
        auto n = build_mode_ops(10).n;
        REQUIRE((n * rho).trace().real() == Approx(num / den).epsilon(1e-12));
        REQUIRE(num / den < 1.0);  // below the untruncated Bose-Einstein value
        REQUIRE(num / den > 0.98);
    }
    SECTION("diagonal, positive, unit trace") {
        for (double beta : {0.1, 1.0, 5.0}) {
            for (int cutoff : {2, 6}) {
                auto rho = thermal_state({2.0, cutoff}, beta);
                REQUIRE(rho.trace().real() == Approx(1.0).epsilon(1e-12));
                for (int i = 0; i <= cutoff; ++i) {
                    REQUIRE(rho(i, i).real() > 0);
                    for (int j = 0; j <= cutoff; ++j)
                        if (i != j) REQUIRE(std::abs(rho(i, j)) == 0.0);
                }
            }
        }
    }
    REQUIRE_THROWS_AS(thermal_state({1.0, 3}, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(thermal_state({1.0, 3}, -1.0), std::invalid_argument);
}

TEST_CASE("tensor_embed") {
    EnvSpace single = EnvSpace::single(1.0, 3);
    auto ops = build_mode_ops(3);
    REQUIRE((tensor_embed(ops.n, 0, single) - ops.n).cwiseAbs().maxCoeff() == 0.0);

    EnvSpace two{{{1.0, 1}, {1.0, 1}}};
    auto small = build_mode_ops(1);
    Mat lifted = tensor_embed(small.n, 0, two);
    REQUIRE(lifted(0, 0).real() == Approx(0));
    REQUIRE(lifted(1, 1).real() == Approx(0));
    REQUIRE(lifted(2, 2).real() == Approx(1));
    REQUIRE(lifted(3, 3).real() == Approx(1));

    Mat x0 = tensor_embed(small.x, 0, two);
    Mat x1 = tensor_embed(small.x, 1, two);
    REQUIRE((x0 * x1 - x1 * x0).cwiseAbs().maxCoeff() < 1e-15);

    REQUIRE_THROWS_AS(tensor_embed(small.x, 2, two), std::invalid_argument);
    REQUIRE_THROWS_AS(tensor_embed(ops.x, 0, two), std::invalid_argument);
}

TEST_CASE("herm_func") {
    SECTION("exp of zero is identity") {
        Mat H = Mat::Zero(4, 4);
        REQUIRE((expm_herm(H, 0.7) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
        Mat cosH = herm_func(H, [](double l) { return cd(std::cos(l), 0); });
        REQUIRE((cosH - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("ground-state Gaussian characteristic function") {
        // <0|cos(theta x)|0> = e^{-theta^2/2} for x = a + a†
        const double g = 4, t = 0.1, theta = 2 * g * t;
        auto ops = build_mode_ops(10);
        Mat C = herm_func(theta * ops.x, [](double l) { return cd(std::cos(l), 0); });
        REQUIRE(C(0, 0).real() == Approx(std::exp(-theta * theta / 2)).margin(1e-6));
        REQUIRE(C(0, 0).real() == Approx(0.72615).margin(1e-5));
    }
    SECTION("unitarity of exp(-itH) for random Hermitian H") {
        std::mt19937_64 rng(42);
        for (int rep = 0; rep < 5; ++rep) {
            Mat H = random_hermitian(6, rng);
            Mat U = expm_herm(H, 0.3);
            REQUIRE((U * U.adjoint() - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SECTION("non-Hermitian input rejected") {
        Mat bad = Mat::Zero(2, 2);
        bad(0, 1) = 1.0;
        REQUIRE_THROWS_AS(expm_herm(bad, 1.0), std::invalid_argument);
    }
}

TEST_CASE("partial_trace") {
    std::mt19937_64 rng(7);
    Mat rho_s = random_density(2, rng);
    Mat rho_e = random_density(3, rng);
    Mat joint = kron(rho_s, rho_e);

    REQUIRE((partial_trace(joint, 2, 3, Keep::System) - rho_s).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((partial_trace(joint, 2, 3, Keep::Env) - rho_e).cwiseAbs().maxCoeff() < 1e-14);

    Mat H = random_hermitian(6, rng);
    REQUIRE(partial_trace(H, 2, 3, Keep::System).trace().real() ==
            Approx(H.trace().real()).epsilon(1e-12));
    REQUIRE_THROWS_AS(partial_trace(H, 4, 3, Keep::System), std::invalid_argument);
}

TEST_CASE("trace_distance") {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    REQUIRE(trace_distance(p0, p0) == Approx(0.0).margin(1e-15));
    REQUIRE(trace_distance(p0, p1) == Approx(1.0));
    REQUIRE(trace_distance(p0, Mat::Identity(2, 2) / 2.0) == Approx(0.5));

    SECTION("symmetry, triangle inequality, unitary invariance") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 10; ++rep) {
            Mat a = random_density(4, rng), b = random_density(4, rng),
                c = random_density(4, rng);
            REQUIRE(trace_distance(a, b) == Approx(trace_distance(b, a)).margin(1e-12));
            REQUIRE(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
            Mat U = expm_herm(random_hermitian(4, rng), 1.0);
            REQUIRE(trace_distance(U * a * U.adjoint(), U * b * U.adjoint()) ==
                    Approx(trace_distance(a, b)).margin(1e-10));
        }
    }
    REQUIRE_THROWS_AS(trace_distance(p0, Mat::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("mixed_fidelity") {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    REQUIRE(mixed_fidelity(p0, p0) == Approx(1.0).margin(1e-12));
    REQUIRE(mixed_fidelity(p0, p1) == Approx(0.0).margin(1e-12));
    REQUIRE(mixed_fidelity(p0, Mat::Identity(2, 2) / 2.0) == Approx(0.5).margin(1e-12));

    SECTION("symmetric on random pairs") {
        std::mt19937_64 rng(9);
        for (int rep = 0; rep < 10; ++rep) {
            Mat a = random_density(4, rng), b = random_density(4, rng);
            REQUIRE(mixed_fidelity(a, b) == Approx(mixed_fidelity(b, a)).margin(1e-8));
        }
    }
}
