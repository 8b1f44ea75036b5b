#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "skln/errors.hpp"
#include "skln/symfuncs.hpp"

using namespace skln;

TEST_CASE("sigma on small vectors") {
    const std::vector<double> a{1, 2, 3};
    CHECK(sigma(a, 2) == 11.0);
    const std::vector<double> b{1, 1, 1, 1};
    CHECK(sigma(b, 3) == 4.0);
    const std::vector<double> c{-1, 2, 2};
    CHECK(sigma(c, 2) == 0.0);
    CHECK_THROWS_AS(sigma(a, 0), ArgumentError);
    CHECK_THROWS_AS(sigma(a, 4), ArgumentError);
}

TEST_CASE("sigma of the all-ones vector is binomial") {
    for (int n = 3; n <= 16; ++n) {
        const std::vector<double> ones(n, 1.0);
        for (int k = 1; k <= n; ++k) {
            CHECK(sigma(ones, k) == doctest::Approx(oracle::binomial(n, k)).epsilon(1e-14));
        }
    }
}

TEST_CASE("sigma agrees with brute-force subsets") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 12;
        std::vector<double> x(n);
        for (double& v : x) v = g(rng);
        for (int k = 1; k <= n; ++k) {
            const double ref = oracle::sigma_subsets(x, k);
            CHECK(std::abs(sigma(x, k) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
            CHECK(std::abs(sigma_all(x)[k] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("sigma is exactly permutation invariant") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 18;
        std::vector<double> x(n);
        for (double& v : x) v = g(rng);
        for (int k = 1; k <= n; ++k) {
            const double ref = sigma(x, k);
            auto y = x;
            std::shuffle(y.begin(), y.end(), rng);
            CHECK(sigma(y, k) == ref);
        }
    }
}

TEST_CASE("cone membership") {
    CHECK(in_gamma_k(EigenvalueVector({1, 1, 1}), 2));
    CHECK_FALSE(in_gamma_k(EigenvalueVector({-1, 2, 2}), 2));
    CHECK(in_gamma_k_closure(EigenvalueVector({-1, 2, 2}), 2));
    CHECK_FALSE(in_gamma_k(EigenvalueVector({5, -1, -1}), 2));
    CHECK_FALSE(in_gamma_k_closure(EigenvalueVector({5, -1, -1}), 2));
    CHECK_THROWS_AS(EigenvalueVector({1, 2}), ArgumentError);
    CHECK_THROWS_AS(in_gamma_k(EigenvalueVector({1, 2, 3}), 4), ArgumentError);
}

TEST_CASE("cone nesting") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.5, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> x(6);
        for (double& v : x) v = g(rng);
        const EigenvalueVector lam(x);
        for (int k = 2; k <= 6; ++k) {
            if (in_gamma_k(lam, k)) {
                for (int j = 1; j < k; ++j) CHECK(in_gamma_k(lam, j));
            }
        }
    }
}

TEST_CASE("trace gap basics") {
    const std::vector<double> m{0.6, 0.8, 0.0};
    CHECK(gamma2bar_trace_gap(SymmetricMatrix(Eigen::MatrixXd::Identity(3, 3)), m) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(gamma2bar_trace_gap(SymmetricMatrix(Eigen::MatrixXd::Zero(3, 3)), m) == 0.0);
    const std::vector<double> bad{1.0, 1.0, 0.0};
    CHECK_THROWS_AS(gamma2bar_trace_gap(SymmetricMatrix(Eigen::MatrixXd::Identity(3, 3)), bad),
                    ArgumentError);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
    asym(0, 1) = 1e-9;
    CHECK_THROWS_AS(SymmetricMatrix{asym}, ArgumentError);
}

TEST_CASE("trace gap is non-negative on the closure of Gamma_2") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    double worst = 1.0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 6;
        const auto lam = oracle::random_gamma2_closure(n, rng, trial % 2 == 0);
        auto sorted = lam;
        std::sort(sorted.begin(), sorted.end());
        double partial = 0.0;
        for (int i = 0; i + 1 < n; ++i) partial += sorted[i];
        CHECK(partial >= -1e-12);
        const Eigen::MatrixXd Q = oracle::random_orthogonal(n, rng);
        Eigen::MatrixXd M = Q * Eigen::Map<const Eigen::VectorXd>(lam.data(), n).asDiagonal() *
                            Q.transpose();
        M = 0.5 * (M + M.transpose()).eval();
        const SymmetricMatrix S(M);
        CHECK(in_gamma_k_closure(EigenvalueVector(S.eigenvalues()), 2, 1e-10));
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> m(n);
            double norm = 0.0;
            for (double& v : m) {
                v = g(rng);
                norm += v * v;
            }
            for (double& v : m) v /= std::sqrt(norm);
            worst = std::min(worst, gamma2bar_trace_gap(S, m));
        }
    }
    CHECK(worst >= -1e-12);
}
