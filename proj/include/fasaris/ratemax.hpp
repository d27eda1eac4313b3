// SPDX-License-Identifier: Apache-2.0
//
// Region-partitioned throughput maximization over the target rate, driven
// by the IAE outage surrogate. The SNR domain x = 2^R - 1 splits into a
// concave head (0, Lambda0], a quasiconcave-or-decreasing tail [Lambda1,
// inf) and a grid-searched middle; the best of the three regional
// candidates, clamped to the configured rate interval, is returned.

#pragma once

#include <optional>

#include "fasaris/channel.hpp"
#include "fasaris/corrmodel.hpp"
#include "fasaris/outage.hpp"

namespace fasaris::ratemax {

struct RateOptOptions {
    int grid_points = 200;          // middle-region log-spaced candidates
    int max_gradient_iters = 200;   // region-1 ascent cap
    int max_newton_iters = 50;      // region-2 root cap
    // Truncation constant U for Lambda0, in units of alpha/(K+1). When
    // <= 0, U falls back to the (1 - u_tail_mass) quantile of the block-gain
    // density instead.
    double u_cap_norm = 11.4;
    double u_tail_mass = 1e-8;
    double omega_x_ref_scale = 1.0;  // weighted mean evaluated at scale*Lambda1
};

struct RateSearchResult {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double u_cap = 0.0;
    double omega = 0.0;
    std::optional<double> x_omega;   // empty in the monotone-decreasing regime
    double r_star = 0.0;             // region-1 candidate rate
    double r_star2 = 0.0;            // region-2 candidate rate
    double r_star3 = 0.0;            // region-3 candidate rate
    double t_star = 0.0, t_star2 = 0.0, t_star3 = 0.0;
    double r_final = 0.0;            // clamp(argmax candidate, [rate_min, rate_max])
    double t_final = 0.0;
    long outage_evals = 0;           // surrogate-outage evaluation count
    int gradient_iters = 0;
    int newton_iters = 0;
};

// T(R) = R (1 - IAE outage at R).
double throughput(double rate, const channel::SystemConfig& cfg,
                  const channel::DerivedParams& params,
                  const corrmodel::BlockPartition& partition,
                  const outage::QuadratureSpec& quad = {});

// Resolve the truncation constant U for the given options.
double resolve_u_cap(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                     const RateOptOptions& opts = {},
                     const outage::QuadratureSpec& quad = {});

// Lambda0 = c / (p1_bar U + p2_bar) and Lambda1 = c / p2_bar with
// c = ((1/a) psi^{-1}(1/a^2))^2. Throw when a^2 <= 2 (psi^{-1} undefined;
// a larger K*M product is required).
double lambda0(const channel::DerivedParams& params, double u_cap);
double lambda1(const channel::DerivedParams& params);

// Weighted mean of sqrt(p1_bar s + p2_bar) under the region-2 tilt of the
// block-gain density, evaluated at x_ref.
double omega(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
             double x_ref, const outage::QuadratureSpec& quad = {});

// Unique sign change of the region-2 slope proxy D_Omega; empty when the
// proxy stays negative past `lo` (monotone-decreasing regime).
std::optional<double> newton_root_domega(double omega_value, double lo, double hi,
                                         int max_iters = 50, int* iters_used = nullptr);

double d_omega(double omega_value, double x);

RateSearchResult optimize_rate(const channel::SystemConfig& cfg,
                               const channel::DerivedParams& params,
                               const corrmodel::BlockPartition& partition,
                               const outage::QuadratureSpec& quad = {},
                               const RateOptOptions& opts = {});

}  // namespace fasaris::ratemax
