// SPDX-License-Identifier: Apache-2.0
//
// Surface control under statistical CSI: phase alignment, per-realization
// full-CSI configuration for the benchmark mode, the multi-antenna BS
// transform, and the weak-direct-link SNR sandwich.

#pragma once

#include <utility>
#include <vector>

#include "fasaris/channel.hpp"

namespace fasaris::ctrl {

// theta_m = arg(h_bar_m) - arg(g_m) (mod 2 pi); aligns every summand of
// h_bar^H Phi g onto the positive real axis. Throws on zero entries.
std::vector<double> optimal_phases(const std::vector<channel::cplx>& h_bar,
                                   const std::vector<channel::cplx>& g);

struct PerfectCsiConfig {
    int port = 0;                 // k*, 0-based
    std::vector<double> phases;   // theta_m for k*
};

// Full-CSI benchmark: k* maximizes sum_m |h_{k,m}| |g_m| (ties -> lowest
// index), phases align the selected port.
PerfectCsiConfig perfect_csi_config(const channel::ChannelSample& sample);

// Remark-style multi-antenna BS scaling: N_b-fold incident power with the
// amplification gain recomputed against the boosted feed. Returns params
// whose thresholds implement "divide the outage threshold by N_b".
channel::DerivedParams nb_transform(const channel::DerivedParams& params,
                                    const channel::SystemConfig& cfg,
                                    int n_bs_antennas);

// ((1-eps)^2 gamma, (1+eps)^2 gamma)
std::pair<double, double> direct_link_bounds(double gamma, double eps);

}  // namespace fasaris::ctrl
