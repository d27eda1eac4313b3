// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fasaris/corrmodel.hpp"
#include "oracles.hpp"

using namespace fasaris::corrmodel;

TEST_CASE("jakes matrix entries")
{
    CorrelationSpec spec{2, 0.5, 0.97};
    const auto m = jakes_matrix(spec);
    CHECK(m(0, 0) == doctest::Approx(1.0));
    CHECK(m(1, 1) == doctest::Approx(1.0));
    // N=2, W=0.5 -> off-diagonal J0(pi)
    const double j0pi = static_cast<double>(oracles::bessel_j0_series(M_PI));
    CHECK(m(0, 1) == doctest::Approx(j0pi).epsilon(1e-10));
    CHECK(m(0, 1) == doctest::Approx(-0.30424).epsilon(1e-4));
    CHECK(m(0, 1) == doctest::Approx(m(1, 0)));
}

TEST_CASE("jakes matrix vs series oracle, symmetry, PSD")
{
    CorrelationSpec spec{100, 5.0, 0.97};
    const auto m = jakes_matrix(spec);
    for (int k = 0; k < 100; k += 7) {
        const double arg = 2.0 * M_PI * k * 5.0 / 99.0;
        const double ref = static_cast<double>(oracles::bessel_j0_series(arg));
        // the alternating series cancels catastrophically at large arguments
        const double tol = arg <= 15.0 ? 1e-12 : 5e-6;
        CHECK(std::fabs(m(0, k) - ref) < tol);
    }
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("partition recovers a truly block-constant correlation")
{
    // N = B*L block-constant matrix: eigenvalues are 1+(L-1)mu^2 (once per
    // block) and 1-mu^2; recovery must be exact with no repair.
    const int B = 3, L = 4, N = B * L;
    const double mu2 = 0.97;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(N, N);
    for (int b = 0; b < B; ++b)
        for (int i = 0; i < L; ++i)
            for (int k = 0; k < L; ++k)
                if (i != k) m(b * L + i, b * L + k) = mu2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto part = partition_from_eigenvalues(es.eigenvalues(), N, mu2);
    REQUIRE(part.block_count() == B);
    for (int s : part.block_sizes) CHECK(s == L);
    CHECK(part.total_ports() == N);
}

TEST_CASE("partition block count at the default geometry")
{
    const auto p100 = bdma_partition({100, 5.0, 0.97});
    CHECK(p100.total_ports() == 100);
    CHECK(p100.block_count() >= 9);    // converges to about 2W
    CHECK(p100.block_count() <= 11);

    const auto p40 = bdma_partition({40, 5.0, 0.97});
    CHECK(p40.block_count() >= 9);
    CHECK(p40.block_count() <= 11);

    // stable beyond N = 40
    const int b_ref = bdma_partition({50, 5.0, 0.97}).block_count();
    for (int n = 55; n <= 100; n += 5) {
        CHECK(bdma_partition({n, 5.0, 0.97}).block_count() == b_ref);
    }
}

TEST_CASE("eigenvalue matching within 15 percent on the stable range")
{
    for (int n : {50, 60, 70, 80, 90, 100}) {
        CorrelationSpec spec{n, 5.0, 0.97};
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jakes_matrix(spec),
                                                          Eigen::EigenvaluesOnly);
        Eigen::VectorXd lam = es.eigenvalues().reverse();
        const auto part = bdma_partition(spec);
        std::vector<double> dominant;
        for (int s : part.block_sizes) dominant.push_back(1.0 + (s - 1) * spec.mu_sq);
        std::sort(dominant.begin(), dominant.end(), std::greater<>());
        for (std::size_t i = 0; i < dominant.size(); ++i) {
            const double rel = std::fabs(dominant[i] - lam[static_cast<int>(i)]) / lam[static_cast<int>(i)];
            CHECK(rel <= 0.15);
        }
        // trace preservation: sum of sizes = N means the block-diagonal
        // approximation has unit diagonal and trace N.
        CHECK(part.total_ports() == n);
    }
}

TEST_CASE("partition determinism and validation")
{
    const auto a = bdma_partition({73, 5.0, 0.97});
    const auto b = bdma_partition({73, 5.0, 0.97});
    CHECK(a.block_sizes == b.block_sizes);

    CHECK_THROWS_AS(bdma_partition({1, 5.0, 0.97}), std::invalid_argument);
    CHECK_THROWS_AS(bdma_partition({10, -1.0, 0.97}), std::invalid_argument);
    CHECK_THROWS_AS(bdma_partition({10, 5.0, 1.0}), std::invalid_argument);

    // degenerate spectrum: eigenvalues all below threshold
    Eigen::VectorXd degraded = Eigen::VectorXd::Constant(8, 0.9);
    CHECK_THROWS_AS(partition_from_eigenvalues(degraded, 8, 0.97), std::runtime_error);
}
