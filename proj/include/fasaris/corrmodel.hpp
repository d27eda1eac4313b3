// SPDX-License-Identifier: Apache-2.0
//
// Jakes port-correlation matrix and its block-diagonal approximation.
// The partition (block count B and sizes {L_b}) fixes the diversity
// structure used by every analytical engine downstream.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fasaris::corrmodel {

struct CorrelationSpec {
    int n_ports;        // N
    double aperture;    // W, in wavelengths
    double mu_sq;       // intra-block correlation coefficient mu^2

    void validate() const;
};

struct BlockPartition {
    std::vector<int> block_sizes;   // {L_b}, sum equals N

    int block_count() const { return static_cast<int>(block_sizes.size()); }
    int total_ports() const;
};

// Symmetric Toeplitz matrix with entries J0(2*pi*|i-k|*W/(N-1)).
Eigen::MatrixXd jakes_matrix(const CorrelationSpec& spec);

// Block sizes from the eigenvalues of a correlation matrix (descending or
// not; sorted internally). A constant-correlation block of size L with
// off-diagonal mu^2 contributes one dominant eigenvalue 1 + (L-1) mu^2, so
// every eigenvalue >= 1 + mu^2 is inverted through L = round((lambda -
// (1-mu^2))/mu^2) and the sizes are then repaired to sum to n_ports.
// Throws std::runtime_error when no eigenvalue clears the threshold.
BlockPartition partition_from_eigenvalues(const Eigen::VectorXd& eigenvalues,
                                          int n_ports, double mu_sq);

// Partition of the Jakes matrix for `spec`.
BlockPartition bdma_partition(const CorrelationSpec& spec);

}  // namespace fasaris::corrmodel
