// SPDX-License-Identifier: Apache-2.0

#include "fasaris/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <stdexcept>
#include <thread>

#include "fasaris/ctrl.hpp"

namespace fasaris::mcsim {

using channel::cplx;

const char* to_string(SimMode mode)
{
    switch (mode) {
        case SimMode::FAS_ARIS: return "FAS_ARIS";
        case SimMode::FAS_PRIS: return "FAS_PRIS";
        case SimMode::SINGLE_FPA: return "SINGLE_FPA";
        case SimMode::PERFECT_CSI: return "PERFECT_CSI";
    }
    return "?";
}

SimMode sim_mode_from_string(const std::string& name)
{
    if (name == "FAS_ARIS") return SimMode::FAS_ARIS;
    if (name == "FAS_PRIS") return SimMode::FAS_PRIS;
    if (name == "SINGLE_FPA") return SimMode::SINGLE_FPA;
    if (name == "PERFECT_CSI") return SimMode::PERFECT_CSI;
    throw std::invalid_argument("unknown simulation mode: " + name);
}

namespace {

// Shared SNR arithmetic for one realization. `phi_g` is Phi*g for the
// statistical-CSI phase configuration.
void snr_into(const channel::ChannelSample& sample, const channel::DerivedParams& params,
              const channel::SystemConfig& cfg, SimMode mode,
              const std::vector<cplx>& phi_g, std::vector<double>& out)
{
    const int n = static_cast<int>(sample.h_ports.size());
    const int m = static_cast<int>(sample.g.size());
    const double p_eff = cfg.tx_power * params.snr_scale;
    const double inv_rho2 = 1.0 / (params.rho_star * params.rho_star);

    auto aris_snr = [&](int k) {
        cplx acc(0.0, 0.0);
        double b2 = 0.0;
        for (int i = 0; i < m; ++i) {
            acc += std::conj(sample.h_ports[k][i]) * phi_g[i];
            b2 += std::norm(sample.h_ports[k][i]);
        }
        const double a2 = std::norm(acc);
        return p_eff * a2 / (b2 * cfg.noise_aris + cfg.noise_mu * inv_rho2);
    };

    switch (mode) {
        case SimMode::FAS_ARIS:
            out.resize(n);
            for (int k = 0; k < n; ++k) out[k] = aris_snr(k);
            break;
        case SimMode::FAS_PRIS:
            out.resize(n);
            for (int k = 0; k < n; ++k) {
                cplx acc(0.0, 0.0);
                for (int i = 0; i < m; ++i) acc += std::conj(sample.h_ports[k][i]) * phi_g[i];
                out[k] = p_eff * std::norm(acc) / cfg.noise_aris;
            }
            break;
        case SimMode::SINGLE_FPA:
            out.resize(1);
            out[0] = aris_snr(0);
            break;
        case SimMode::PERFECT_CSI: {
            const auto sel = ctrl::perfect_csi_config(sample);
            double a = 0.0, b2 = 0.0;
            for (int i = 0; i < m; ++i) {
                a += std::abs(sample.h_ports[sel.port][i]) * std::abs(sample.g[i]);
                b2 += std::norm(sample.h_ports[sel.port][i]);
            }
            out.resize(1);
            out[0] = p_eff * a * a / (b2 * cfg.noise_aris + cfg.noise_mu * inv_rho2);
            break;
        }
    }
}

std::vector<cplx> statistical_phi_g(const channel::ChannelSampler& sampler)
{
    const auto theta = ctrl::optimal_phases(sampler.h_bar(), sampler.g());
    std::vector<cplx> phi_g(sampler.g().size());
    for (std::size_t i = 0; i < phi_g.size(); ++i) {
        phi_g[i] = std::polar(1.0, theta[i]) * sampler.g()[i];
    }
    return phi_g;
}

}  // namespace

std::vector<double> snr_per_port(const channel::ChannelSample& sample,
                                 const channel::DerivedParams& params,
                                 const channel::SystemConfig& cfg, SimMode mode)
{
    const auto theta = ctrl::optimal_phases(sample.h_bar, sample.g);
    std::vector<cplx> phi_g(sample.g.size());
    for (std::size_t i = 0; i < phi_g.size(); ++i) {
        phi_g[i] = std::polar(1.0, theta[i]) * sample.g[i];
    }
    std::vector<double> out;
    snr_into(sample, params, cfg, mode, phi_g, out);
    return out;
}

McEstimate mc_outage(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                     const corrmodel::BlockPartition& partition, double rate, SimMode mode,
                     long trials, std::uint64_t seed, int threads)
{
    if (trials < 1) throw std::invalid_argument("mc_outage: trials must be >= 1");
    const channel::ChannelSampler sampler(cfg, partition);
    const auto phi_g = statistical_phi_g(sampler);
    const double snr_th = std::exp2(rate) - 1.0;

    const int nthreads = threads > 0 ? threads
                                     : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<long>> futs;
    futs.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        futs.push_back(std::async(std::launch::async, [&, t]() {
            channel::ChannelSample sample;
            std::vector<double> snrs;
            long count = 0;
            for (long trial = t; trial < trials; trial += nthreads) {
                sampler.sample(seed, static_cast<std::uint64_t>(trial), sample);
                snr_into(sample, params, cfg, mode, phi_g, snrs);
                const double best = *std::max_element(snrs.begin(), snrs.end());
                if (best < snr_th) ++count;
            }
            return count;
        }));
    }
    long outages = 0;
    for (auto& f : futs) outages += f.get();

    McEstimate est;
    est.trials = trials;
    est.value = static_cast<double>(outages) / static_cast<double>(trials);
    est.std_err = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(trials));
    return est;
}

McEstimate mc_throughput(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                         const corrmodel::BlockPartition& partition, double rate, SimMode mode,
                         long trials, std::uint64_t seed, int threads)
{
    McEstimate est = mc_outage(cfg, params, partition, rate, mode, trials, seed, threads);
    est.value = rate * (1.0 - est.value);
    est.std_err *= rate;
    return est;
}

}  // namespace fasaris::mcsim
