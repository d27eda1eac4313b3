// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fasaris/channel.hpp"
#include "fasaris/corrmodel.hpp"
#include "fasaris/mathfn.hpp"
#include "fasaris/outage.hpp"
#include "oracles.hpp"

using namespace fasaris;
using channel::SystemConfig;
using corrmodel::BlockPartition;
using outage::outage_bdma;
using outage::outage_iae;

namespace {

const SystemConfig kCfg{};
const channel::DerivedParams kParams = channel::derive_params(kCfg);
const BlockPartition kPart = corrmodel::bdma_partition(kCfg.correlation_spec());

}  // namespace

TEST_CASE("gauss-legendre rule integrates polynomials exactly")
{
    const auto rule = outage::gauss_legendre(8, -1.0, 3.0);
    double s0 = 0.0, s5 = 0.0;
    for (int i = 0; i < 8; ++i) {
        s0 += rule.weights[i];
        s5 += rule.weights[i] * std::pow(rule.nodes[i], 5);
    }
    CHECK(s0 == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(s5 == doctest::Approx((std::pow(3.0, 6) - 1.0) / 6.0).epsilon(1e-12));
}

TEST_CASE("gbar is the scaled noncentral chi-squared density")
{
    const double scale = kParams.alpha / (2.0 * (kCfg.rician_k + 1.0));
    const double ncp = 2.0 * kCfg.rician_k * kCfg.m_elements;
    const double mean = kParams.alpha * kCfg.m_elements;
    for (double s : {0.1 * mean, mean, 3.0 * mean}) {
        const double a = outage::gbar(s, kParams, kCfg);
        const double b = mathfn::ncx2_scaled_pdf(s, scale, 2 * kCfg.m_elements, ncp);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
    const double hi = mathfn::ncx2_scaled_upper_quantile(1e-12, scale, 2 * kCfg.m_elements, ncp);
    const double mass = oracles::adaptive_simpson(
        [&](double s) { return outage::gbar(s, kParams, kCfg); }, 0.0, hi, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    const double first = oracles::adaptive_simpson(
        [&](double s) { return s * outage::gbar(s, kParams, kCfg); }, 0.0, hi, mean * 1e-9);
    CHECK(first == doctest::Approx(mean).epsilon(1e-4));   // scale*(dof+ncp) = alpha*M
}

TEST_CASE("IAE limits and monotonicity in rate")
{
    CHECK(outage_iae(kCfg, kParams, kPart, 1e-9) <= 1e-12);
    // saturates at 1 - O(B * tail_mass) from domain truncation
    CHECK(outage_iae(kCfg, kParams, kPart, 30.0) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = -1.0;
    for (double r : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
        const double p = outage_iae(kCfg, kParams, kPart, r);
        CHECK(p >= prev - 1e-12);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("BDMA is below the IAE bound and monotone in rate")
{
    outage::QuadratureSpec quad{48, 1e-8, 48};
    double prev = -1.0;
    for (double r : {2.0, 3.5, 5.0}) {
        const double pb = outage_bdma(kCfg, kParams, kPart, r, quad);
        const double pi = outage_iae(kCfg, kParams, kPart, r, quad);
        CHECK(pb <= pi + 1e-9);
        CHECK(pb >= prev - 1e-12);
        CHECK(pb >= 0.0);
        CHECK(pb <= 1.0);
        prev = pb;
    }
}

TEST_CASE("eta monotonicity: larger LoS cascade cannot raise outage")
{
    outage::QuadratureSpec quad{48, 1e-8, 48};
    SystemConfig cfg = kCfg;
    cfg.m_elements = 2;
    cfg.tx_power = channel::dbm_to_watt(6.0);
    const auto params = channel::derive_params(cfg);
    double prev = 2.0;
    for (double f : {0.5, 1.0, 2.0}) {
        auto scaled = params;
        scaled.eta_abs = f * params.eta_abs;
        const double p = outage_bdma(cfg, scaled, kPart, 2.0, quad);
        CHECK(p <= prev + 1e-9);
        prev = p;
    }
}

TEST_CASE("fully correlated limit approaches the IAE value")
{
    SystemConfig cfg = kCfg;
    cfg.mu_sq = 0.999;
    cfg.tx_power = channel::dbm_to_watt(6.0);
    cfg.m_elements = 2;
    const auto params = channel::derive_params(cfg);
    // the conditional inner density narrows as mu^2 -> 1; the default order
    // is needed for the refinement gate to clear
    outage::QuadratureSpec quad{96, 1e-8, 96};
    const double pb = outage_bdma(cfg, params, kPart, 2.0, quad);
    const double pi = outage_iae(cfg, params, kPart, 2.0, quad);
    CHECK(std::fabs(pb - pi) < 1e-3);
    CHECK(pb <= pi + 1e-9);
}

TEST_CASE("factorized evaluator equals brute-force integration on a tiny instance")
{
    // N = 2 ports in one block, M = 1 element: the unfactorized form is a
    // 4-D integral over (r, s_b, u_1, u_2).
    SystemConfig cfg = kCfg;
    cfg.n_ports = 2;
    cfg.m_elements = 1;
    cfg.mu_sq = 0.9;
    cfg.tx_power = channel::dbm_to_watt(6.0);
    const BlockPartition part{{2}};
    const auto params = channel::derive_params(cfg);
    const double rate = 2.0;

    outage::QuadratureSpec quad{48, 1e-9, 48};
    const double fact = outage_bdma(cfg, params, part, rate, quad);

    const double k = cfg.rician_k, kp1 = k + 1.0, mu2 = cfg.mu_sq;
    const double al = params.alpha, sb2 = params.sigma_bar_sq;
    const double p1 = params.p1(rate), p2 = params.p2(rate);
    const double sigma_r = std::sqrt(0.5 * sb2 * mu2);
    const double c1 = std::sqrt(2.0 / (sb2 * (1.0 - mu2)));
    const double c_chi = std::sqrt(0.5 * mu2 * al / kp1);
    const double lam_chi = std::sqrt(2.0 * k) / std::sqrt(mu2);
    const double c_cond = al * (1.0 - mu2) / (2.0 * kp1);

    const int nq = 40;
    const double r_hi = mathfn::rician_upper_quantile(1e-9, params.eta_abs, sigma_r);
    const double s_hi = mathfn::ncchi_scaled_upper_quantile(1e-9, c_chi, 2, lam_chi);
    const auto rr = outage::gauss_legendre(nq, 0.0, r_hi);
    const auto rs = outage::gauss_legendre(nq, 0.0, s_hi);

    double total = 0.0;
    std::vector<double> f(nq);
    for (int j = 0; j < nq; ++j) {
        const double s_b = rs.nodes[j];
        const double lam_u = s_b * s_b / c_cond;
        const double u_lo = mathfn::ncx2_scaled_lower_quantile(1e-9, c_cond, 2, lam_u);
        const double u_hi = mathfn::ncx2_scaled_upper_quantile(1e-9, c_cond, 2, lam_u);
        const auto ru = outage::gauss_legendre(nq, u_lo, u_hi);
        for (int i = 0; i < nq; ++i) {
            const double r = rr.nodes[i];
            for (int t = 0; t < nq; ++t) {
                f[t] = ru.weights[t]
                     * mathfn::ncx2_scaled_pdf(ru.nodes[t], c_cond, 2, lam_u)
                     * (1.0 - mathfn::marcum_q1(c1 * r, c1 * std::sqrt(p1 * ru.nodes[t] + p2)));
            }
            // literal double sum over (u_1, u_2); no product shortcut
            double inner = 0.0;
            for (int t1 = 0; t1 < nq; ++t1)
                for (int t2 = 0; t2 < nq; ++t2) inner += f[t1] * f[t2];
            total += rr.weights[i] * rs.weights[j]
                   * mathfn::rician_pdf(r, params.eta_abs, sigma_r)
                   * mathfn::ncchi_scaled_pdf(s_b, c_chi, 2, lam_chi) * inner;
        }
    }
    CHECK(std::fabs(fact - total) < 1e-4);
}

TEST_CASE("outage stays a probability over random valid configurations")
{
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        SystemConfig cfg;
        cfg.m_elements = 1 + static_cast<int>(ud(rng) * 6);
        cfg.n_ports = 10 + static_cast<int>(ud(rng) * 60);
        cfg.aperture = 1.0 + 6.0 * ud(rng);
        cfg.rician_k = 0.2 + 4.0 * ud(rng);
        cfg.mu_sq = 0.5 + 0.45 * ud(rng);
        cfg.tx_power = channel::dbm_to_watt(0.0 + 20.0 * ud(rng));
        cfg.rho_max_sq = std::pow(10.0, 2.0 + 2.0 * ud(rng));
        cfg.ref_loss_db = -20.0 + 15.0 * ud(rng);
        cfg.ref_loss_bs_aris_db = -90.0 + 20.0 * ud(rng);
        const auto part = corrmodel::bdma_partition(cfg.correlation_spec());
        const auto params = channel::derive_params(cfg);
        const double r = 0.25 + 7.0 * ud(rng);
        const double v = outage_iae(cfg, params, part, r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("quadrature spec validation")
{
    outage::QuadratureSpec bad{4, 1e-8, 96};
    CHECK_THROWS_AS(outage_iae(kCfg, kParams, kPart, 2.0, bad), std::invalid_argument);
    outage::QuadratureSpec bad2{96, 0.5, 96};
    CHECK_THROWS_AS(outage_iae(kCfg, kParams, kPart, 2.0, bad2), std::invalid_argument);
}
