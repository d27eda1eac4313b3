// SPDX-License-Identifier: Apache-2.0

#include "fasaris/ctrl.hpp"

#include <cmath>
#include <stdexcept>

namespace fasaris::ctrl {

namespace {

double wrap_2pi(double theta)
{
    theta = std::fmod(theta, 2.0 * M_PI);
    return theta < 0.0 ? theta + 2.0 * M_PI : theta;
}

}  // namespace

std::vector<double> optimal_phases(const std::vector<channel::cplx>& h_bar,
                                   const std::vector<channel::cplx>& g)
{
    if (h_bar.size() != g.size() || h_bar.empty()) {
        throw std::invalid_argument("optimal_phases: mismatched or empty vectors");
    }
    std::vector<double> theta(h_bar.size());
    for (std::size_t m = 0; m < h_bar.size(); ++m) {
        if (std::abs(h_bar[m]) == 0.0 || std::abs(g[m]) == 0.0) {
            throw std::invalid_argument("optimal_phases: zero-magnitude entry");
        }
        theta[m] = wrap_2pi(std::arg(h_bar[m]) - std::arg(g[m]));
    }
    return theta;
}

PerfectCsiConfig perfect_csi_config(const channel::ChannelSample& sample)
{
    const int n = static_cast<int>(sample.h_ports.size());
    const int m = static_cast<int>(sample.g.size());
    int best = 0;
    double best_metric = -1.0;
    for (int k = 0; k < n; ++k) {
        double metric = 0.0;
        for (int i = 0; i < m; ++i) {
            metric += std::abs(sample.h_ports[k][i]) * std::abs(sample.g[i]);
        }
        if (metric > best_metric) {
            best_metric = metric;
            best = k;
        }
    }
    PerfectCsiConfig out;
    out.port = best;
    out.phases.resize(m);
    for (int i = 0; i < m; ++i) {
        out.phases[i] = wrap_2pi(std::arg(sample.h_ports[best][i]) - std::arg(sample.g[i]));
    }
    return out;
}

channel::DerivedParams nb_transform(const channel::DerivedParams& params,
                                    const channel::SystemConfig& cfg,
                                    int n_bs_antennas)
{
    if (n_bs_antennas < 1) throw std::invalid_argument("nb_transform: n_bs_antennas must be >= 1");
    if (n_bs_antennas == 1) return params;
    channel::DerivedParams p = params;
    const double nb = static_cast<double>(n_bs_antennas);
    const double rho_free_sq =
        cfg.aris_budget / (cfg.m_elements * (cfg.tx_power * params.beta * nb + cfg.noise_aris));
    p.rho_star = std::sqrt(std::min(rho_free_sq, cfg.rho_max_sq));
    p.snr_scale = params.snr_scale * nb;
    p.p1_coeff = cfg.noise_aris / (cfg.tx_power * p.snr_scale);
    p.p2_coeff = cfg.noise_mu / (cfg.tx_power * p.snr_scale * p.rho_star * p.rho_star);
    p.p1_bar = 2.0 * cfg.noise_aris / (cfg.tx_power * p.snr_scale * p.sigma_bar_sq);
    p.p2_bar = 2.0 * cfg.noise_mu /
               (cfg.tx_power * p.snr_scale * p.sigma_bar_sq * p.rho_star * p.rho_star);
    return p;
}

std::pair<double, double> direct_link_bounds(double gamma, double eps)
{
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("direct_link_bounds: eps in [0,1)");
    return {(1.0 - eps) * (1.0 - eps) * gamma, (1.0 + eps) * (1.0 + eps) * gamma};
}

}  // namespace fasaris::ctrl
