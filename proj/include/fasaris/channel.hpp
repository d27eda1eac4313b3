// SPDX-License-Identifier: Apache-2.0
//
// System configuration, derived link parameters and random channel
// realizations of the block-correlated Rician model:
//   h_k = sqrt(alpha K/(K+1)) h_bar + mu h_tilde_b(k) + sqrt(1-mu^2) e_k,
// with h_tilde_b, e_k ~ CN(0, alpha/(K+1) I_M) and g = sqrt(beta) g_bar.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fasaris/corrmodel.hpp"

namespace fasaris::channel {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

struct SystemConfig {
    int m_elements = 4;                  // M, reflecting elements
    int n_ports = 100;                   // N, fluid antenna ports
    double aperture = 5.0;               // W, in wavelengths
    double rician_k = 1.0;               // K
    double mu_sq = 0.97;                 // intra-block correlation
    double tx_power = dbm_to_watt(10.0);        // P  [W]
    double aris_budget = dbm_to_watt(10.0);     // P' [W]
    double noise_aris = dbm_to_watt(-104.0);    // sigma^2  [W]
    double noise_mu = dbm_to_watt(-104.0);      // sigma0^2 [W]
    double rho_max_sq = 1e4;             // amplification power-gain cap
    Vec3 pos_bs{0.0, 0.0, 5.0};          // meters
    Vec3 pos_aris{15.0, 15.0, 5.0};
    Vec3 pos_mu{55.0, 0.0, 0.0};
    double ple_aris_mu = 2.2;            // path-loss exponents
    double ple_bs_aris = 2.0;
    double ref_loss_db = -8.61;          // reference gain at 1 m, ARIS-MU link
    double ref_loss_bs_aris_db = -76.55; // reference gain at 1 m, BS-ARIS link
    double rate_min = 0.0;               // bits/s/Hz
    double rate_max = 8.0;
    std::uint64_t los_seed = 2026;       // fixes the deterministic LoS phases

    void validate() const;

    corrmodel::CorrelationSpec correlation_spec() const
    {
        return {n_ports, aperture, mu_sq};
    }
};

// JSON round-trip. Power fields are dBm in the file and watts in memory.
SystemConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const SystemConfig& cfg);

struct DerivedParams {
    double alpha = 0.0;          // ARIS->MU linear path gain
    double beta = 0.0;           // BS->ARIS linear path gain
    double sigma_bar_sq = 0.0;   // M alpha beta / (K+1)
    double rho_star = 0.0;       // amplification gain, rho* <= sqrt(rho_max_sq)
    double eta_abs = 0.0;        // |eta| under optimal phase alignment
    double a = 0.0;              // sqrt(2 K M)
    double p1_coeff = 0.0;       // p1(R) = (2^R - 1) * p1_coeff
    double p2_coeff = 0.0;       // p2(R) = (2^R - 1) * p2_coeff
    double p1_bar = 0.0;         // 2 sigma^2 / (P sigma_bar^2 * snr_scale)
    double p2_bar = 0.0;         // p1_bar / rho*^2
    double snr_scale = 1.0;      // multi-antenna BS boost N_b

    double p1(double rate) const { return (std::exp2(rate) - 1.0) * p1_coeff; }
    double p2(double rate) const { return (std::exp2(rate) - 1.0) * p2_coeff; }
};

DerivedParams derive_params(const SystemConfig& cfg);

struct ChannelSample {
    std::vector<cplx> g;                          // M, BS->ARIS
    std::vector<cplx> h_bar;                      // M, shared unit-modulus LoS
    std::vector<std::vector<cplx>> h_tilde_blocks;    // B x M
    std::vector<std::vector<cplx>> port_innovations;  // N x M
    std::vector<std::vector<cplx>> h_ports;           // N x M assembled
};

// Draws one realization; deterministic in (cfg.los_seed, seed, trial).
class ChannelSampler {
public:
    ChannelSampler(const SystemConfig& cfg, const corrmodel::BlockPartition& partition);

    void sample(std::uint64_t seed, std::uint64_t trial, ChannelSample& out) const;

    const std::vector<cplx>& g() const { return g_; }
    const std::vector<cplx>& h_bar() const { return h_bar_; }
    const std::vector<int>& block_of_port() const { return block_of_port_; }
    int n_ports() const { return n_; }
    int m_elements() const { return m_; }
    int n_blocks() const { return b_; }

private:
    int m_, n_, b_;
    double mu_, mu_c_;        // mu, sqrt(1 - mu^2)
    double nlos_sd_;          // per-real-component std of the CN(0, alpha/(K+1)) draws
    std::vector<cplx> g_, h_bar_, los_;
    std::vector<int> block_of_port_;
};

ChannelSample sample_channel(const SystemConfig& cfg,
                             const corrmodel::BlockPartition& partition,
                             std::uint64_t seed, std::uint64_t trial = 0);

}  // namespace fasaris::channel
