// SPDX-License-Identifier: Apache-2.0

#include "fasaris/corrmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fasaris::corrmodel {

void CorrelationSpec::validate() const
{
    if (n_ports < 2) throw std::invalid_argument("CorrelationSpec: n_ports must be >= 2");
    if (!(aperture > 0.0)) throw std::invalid_argument("CorrelationSpec: aperture must be positive");
    if (!(mu_sq > 0.0 && mu_sq < 1.0)) throw std::invalid_argument("CorrelationSpec: mu_sq must lie in (0,1)");
}

int BlockPartition::total_ports() const
{
    return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

Eigen::MatrixXd jakes_matrix(const CorrelationSpec& spec)
{
    spec.validate();
    const int n = spec.n_ports;
    Eigen::VectorXd row(n);
    for (int k = 0; k < n; ++k) {
        row[k] = std::cyl_bessel_j(0.0, 2.0 * M_PI * k * spec.aperture / (n - 1));
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(i, k) = row[std::abs(i - k)];
    return m;
}

BlockPartition partition_from_eigenvalues(const Eigen::VectorXd& eigenvalues,
                                          int n_ports, double mu_sq)
{
    std::vector<double> lam(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::sort(lam.begin(), lam.end(), std::greater<>());

    std::vector<int> sizes;
    for (double l : lam) {
        if (l < 1.0 + mu_sq) break;   // below the smallest dominant eigenvalue of a real block
        const int lb = std::max<int>(1, std::lround((l - (1.0 - mu_sq)) / mu_sq));
        sizes.push_back(lb);
    }
    if (sizes.empty()) {
        throw std::runtime_error("bdma_partition: no eigenvalue clears the 1+mu^2 threshold; "
                                 "correlation spectrum is degenerate");
    }

    // Repair sum(L_b) == N one unit at a time, cycling from the largest block.
    int diff = n_ports - std::accumulate(sizes.begin(), sizes.end(), 0);
    std::size_t j = 0;
    while (diff != 0) {
        std::size_t i = j % sizes.size();
        if (diff > 0) {
            ++sizes[i];
            --diff;
        } else if (sizes[i] > 1) {
            --sizes[i];
            ++diff;
        }
        ++j;
        if (j > 100000) throw std::runtime_error("bdma_partition: size repair did not converge");
    }
    return BlockPartition{std::move(sizes)};
}

BlockPartition bdma_partition(const CorrelationSpec& spec)
{
    spec.validate();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jakes_matrix(spec),
                                                      Eigen::EigenvaluesOnly);
    return partition_from_eigenvalues(es.eigenvalues(), spec.n_ports, spec.mu_sq);
}

}  // namespace fasaris::corrmodel
