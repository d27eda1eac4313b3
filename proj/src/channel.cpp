// SPDX-License-Identifier: Apache-2.0

#include "fasaris/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fasaris/rng.hpp"

namespace fasaris::channel {

using json = nlohmann::json;

double distance(const Vec3& a, const Vec3& b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

void SystemConfig::validate() const
{
    if (m_elements < 1) throw std::invalid_argument("SystemConfig: m_elements must be >= 1");
    if (n_ports < 2) throw std::invalid_argument("SystemConfig: n_ports must be >= 2");
    if (!(aperture > 0.0)) throw std::invalid_argument("SystemConfig: aperture must be positive");
    if (rician_k < 0.0) throw std::invalid_argument("SystemConfig: rician_k must be >= 0");
    for (double p : {tx_power, aris_budget, noise_aris, noise_mu, rho_max_sq}) {
        if (!(p > 0.0)) throw std::invalid_argument("SystemConfig: powers and the gain cap must be positive");
    }
    if (!(mu_sq > 0.0 && mu_sq < 1.0)) throw std::invalid_argument("SystemConfig: mu_sq must lie in (0,1)");
    if (!(rate_min <= rate_max)) throw std::invalid_argument("SystemConfig: rate_min must not exceed rate_max");
    if (!(ple_aris_mu > 0.0) || !(ple_bs_aris > 0.0)) {
        throw std::invalid_argument("SystemConfig: path-loss exponents must be positive");
    }
}

namespace {

Vec3 vec3_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("positions must be [x,y,z] arrays");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

SystemConfig config_from_json_text(const std::string& text)
{
    json j = json::parse(text);
    SystemConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("m_elements", cfg.m_elements);
    get("n_ports", cfg.n_ports);
    get("aperture", cfg.aperture);
    get("rician_k", cfg.rician_k);
    get("mu_sq", cfg.mu_sq);
    if (j.contains("tx_power")) cfg.tx_power = dbm_to_watt(j.at("tx_power").get<double>());
    if (j.contains("aris_budget")) cfg.aris_budget = dbm_to_watt(j.at("aris_budget").get<double>());
    if (j.contains("noise_aris")) cfg.noise_aris = dbm_to_watt(j.at("noise_aris").get<double>());
    if (j.contains("noise_mu")) cfg.noise_mu = dbm_to_watt(j.at("noise_mu").get<double>());
    get("rho_max_sq", cfg.rho_max_sq);
    if (j.contains("pos_bs")) cfg.pos_bs = vec3_from_json(j.at("pos_bs"));
    if (j.contains("pos_aris")) cfg.pos_aris = vec3_from_json(j.at("pos_aris"));
    if (j.contains("pos_mu")) cfg.pos_mu = vec3_from_json(j.at("pos_mu"));
    get("ple_aris_mu", cfg.ple_aris_mu);
    get("ple_bs_aris", cfg.ple_bs_aris);
    if (j.contains("ref_loss_db")) {
        cfg.ref_loss_db = j.at("ref_loss_db").get<double>();
        // a single stated reference applies to both links unless overridden
        cfg.ref_loss_bs_aris_db = cfg.ref_loss_db;
    }
    get("ref_loss_bs_aris_db", cfg.ref_loss_bs_aris_db);
    get("rate_min", cfg.rate_min);
    get("rate_max", cfg.rate_max);
    get("los_seed", cfg.los_seed);
    cfg.validate();
    return cfg;
}

std::string config_to_json_text(const SystemConfig& cfg)
{
    json j;
    j["m_elements"] = cfg.m_elements;
    j["n_ports"] = cfg.n_ports;
    j["aperture"] = cfg.aperture;
    j["rician_k"] = cfg.rician_k;
    j["mu_sq"] = cfg.mu_sq;
    j["tx_power"] = watt_to_dbm(cfg.tx_power);
    j["aris_budget"] = watt_to_dbm(cfg.aris_budget);
    j["noise_aris"] = watt_to_dbm(cfg.noise_aris);
    j["noise_mu"] = watt_to_dbm(cfg.noise_mu);
    j["rho_max_sq"] = cfg.rho_max_sq;
    j["pos_bs"] = vec3_to_json(cfg.pos_bs);
    j["pos_aris"] = vec3_to_json(cfg.pos_aris);
    j["pos_mu"] = vec3_to_json(cfg.pos_mu);
    j["ple_aris_mu"] = cfg.ple_aris_mu;
    j["ple_bs_aris"] = cfg.ple_bs_aris;
    j["ref_loss_db"] = cfg.ref_loss_db;
    j["ref_loss_bs_aris_db"] = cfg.ref_loss_bs_aris_db;
    j["rate_min"] = cfg.rate_min;
    j["rate_max"] = cfg.rate_max;
    j["los_seed"] = cfg.los_seed;
    return j.dump(2);
}

DerivedParams derive_params(const SystemConfig& cfg)
{
    cfg.validate();
    const double d_am = distance(cfg.pos_aris, cfg.pos_mu);
    const double d_ba = distance(cfg.pos_bs, cfg.pos_aris);
    if (d_am <= 0.0 || d_ba <= 0.0) {
        throw std::invalid_argument("derive_params: coincident node positions");
    }
    DerivedParams p;
    p.alpha = std::pow(10.0, cfg.ref_loss_db / 10.0) * std::pow(d_am, -cfg.ple_aris_mu);
    p.beta = std::pow(10.0, cfg.ref_loss_bs_aris_db / 10.0) * std::pow(d_ba, -cfg.ple_bs_aris);
    const double kp1 = cfg.rician_k + 1.0;
    p.sigma_bar_sq = cfg.m_elements * p.alpha * p.beta / kp1;
    const double rho_free_sq =
        cfg.aris_budget / (cfg.m_elements * (cfg.tx_power * p.beta + cfg.noise_aris));
    p.rho_star = std::sqrt(std::min(rho_free_sq, cfg.rho_max_sq));
    p.eta_abs = std::sqrt(p.sigma_bar_sq * cfg.rician_k * cfg.m_elements);
    p.a = std::sqrt(2.0 * cfg.rician_k * cfg.m_elements);
    p.p1_coeff = cfg.noise_aris / cfg.tx_power;
    p.p2_coeff = cfg.noise_mu / (cfg.tx_power * p.rho_star * p.rho_star);
    p.p1_bar = 2.0 * cfg.noise_aris / (cfg.tx_power * p.sigma_bar_sq);
    p.p2_bar = 2.0 * cfg.noise_mu / (cfg.tx_power * p.sigma_bar_sq * p.rho_star * p.rho_star);
    p.snr_scale = 1.0;
    return p;
}

ChannelSampler::ChannelSampler(const SystemConfig& cfg,
                               const corrmodel::BlockPartition& partition)
    : m_(cfg.m_elements), n_(cfg.n_ports), b_(partition.block_count())
{
    cfg.validate();
    if (partition.total_ports() != n_) {
        throw std::invalid_argument("ChannelSampler: partition does not cover n_ports");
    }
    mu_ = std::sqrt(cfg.mu_sq);
    mu_c_ = std::sqrt(1.0 - cfg.mu_sq);
    const auto params = derive_params(cfg);
    const double kp1 = cfg.rician_k + 1.0;
    nlos_sd_ = std::sqrt(params.alpha / (2.0 * kp1));

    // Deterministic unit-modulus LoS vectors; phases drawn once so the
    // alignment logic downstream is exercised by non-trivial angles.
    rng::Xoshiro256ss los(cfg.los_seed, 0xA11CE);
    g_.resize(m_);
    h_bar_.resize(m_);
    los_.resize(m_);
    const double gmag = std::sqrt(params.beta);
    const double los_mag = std::sqrt(params.alpha * cfg.rician_k / kp1);
    for (int m = 0; m < m_; ++m) {
        const double pg = 2.0 * M_PI * los.uniform();
        const double ph = 2.0 * M_PI * los.uniform();
        g_[m] = std::polar(gmag, pg);
        h_bar_[m] = std::polar(1.0, ph);
        los_[m] = los_mag * h_bar_[m];
    }

    block_of_port_.reserve(n_);
    for (int b = 0; b < b_; ++b) {
        for (int i = 0; i < partition.block_sizes[b]; ++i) block_of_port_.push_back(b);
    }
}

void ChannelSampler::sample(std::uint64_t seed, std::uint64_t trial, ChannelSample& out) const
{
    rng::GaussianStream gs(seed, trial);

    out.g = g_;
    out.h_bar = h_bar_;
    out.h_tilde_blocks.assign(b_, std::vector<cplx>(m_));
    out.port_innovations.assign(n_, std::vector<cplx>(m_));
    out.h_ports.assign(n_, std::vector<cplx>(m_));

    for (int b = 0; b < b_; ++b) {
        for (int m = 0; m < m_; ++m) {
            out.h_tilde_blocks[b][m] = cplx(nlos_sd_ * gs.next(), nlos_sd_ * gs.next());
        }
    }
    for (int k = 0; k < n_; ++k) {
        const auto& hb = out.h_tilde_blocks[block_of_port_[k]];
        for (int m = 0; m < m_; ++m) {
            const cplx e(nlos_sd_ * gs.next(), nlos_sd_ * gs.next());
            out.port_innovations[k][m] = e;
            out.h_ports[k][m] = los_[m] + mu_ * hb[m] + mu_c_ * e;
        }
    }
}

ChannelSample sample_channel(const SystemConfig& cfg,
                             const corrmodel::BlockPartition& partition,
                             std::uint64_t seed, std::uint64_t trial)
{
    ChannelSampler sampler(cfg, partition);
    ChannelSample out;
    sampler.sample(seed, trial, out);
    return out;
}

}  // namespace fasaris::channel
