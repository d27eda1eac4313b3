// SPDX-License-Identifier: Apache-2.0
//
// Analytical outage probability. Two engines:
//  - outage_iae: the independent-antennas-equivalent upper bound, a single
//    1-D integral raised to the block count B;
//  - outage_bdma: the exact block-model expression, factorized into one
//    2-D outer integral per block with a shared 1-D inner kernel.

#pragma once

#include <stdexcept>
#include <vector>

#include "fasaris/channel.hpp"
#include "fasaris/corrmodel.hpp"

namespace fasaris::outage {

struct QuadratureSpec {
    int nodes_per_dim = 96;    // Gauss-Legendre order of each outer dimension
    double tail_mass = 1e-8;   // probability mass dropped when truncating
    int inner_nodes = 96;      // order of the conditional inner integral

    void validate() const
    {
        if (nodes_per_dim < 8 || inner_nodes < 8) {
            throw std::invalid_argument("QuadratureSpec: need at least 8 nodes per dimension");
        }
        if (!(tail_mass > 0.0 && tail_mass < 1e-3)) {
            throw std::invalid_argument("QuadratureSpec: tail_mass must lie in (0, 1e-3)");
        }
    }
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes/weights on [a, b]; rules are cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int order, double a, double b);

// Density of the squared effective block gain in the fully-correlated limit
// (scaled noncentral chi-squared with dof 2M and noncentrality 2KM written
// out explicitly).
double gbar(double s, const channel::DerivedParams& params, const channel::SystemConfig& cfg);

double outage_iae(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                  const corrmodel::BlockPartition& partition, double rate,
                  const QuadratureSpec& quad = {});

double outage_bdma(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                   const corrmodel::BlockPartition& partition, double rate,
                   const QuadratureSpec& quad = {});

}  // namespace fasaris::outage
