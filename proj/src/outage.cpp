// SPDX-License-Identifier: Apache-2.0

#include "fasaris/outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include "fasaris/mathfn.hpp"

namespace fasaris::outage {

using mathfn::marcum_q1;

namespace {

std::vector<double> legendre_nodes_unit(int order)
{
    // roots of P_n on (-1,1) by Newton iteration on the recurrence
    std::vector<double> x(order);
    const int m = (order + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(M_PI * (i - 0.25) / (order + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            const double pp = order * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i - 1] = -z;
        x[order - i] = z;
    }
    return x;
}

const std::pair<std::vector<double>, std::vector<double>>& unit_rule(int order)
{
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    auto nodes = legendre_nodes_unit(order);
    std::vector<double> w(order);
    for (int i = 0; i < order; ++i) {
        const double z = nodes[i];
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= order; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        const double pp = order * (z * p1 - p2) / (z * z - 1.0);
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(order, std::make_pair(std::move(nodes), std::move(w))).first->second;
}

}  // namespace

GaussLegendre gauss_legendre(int order, double a, double b)
{
    const auto& [xs, ws] = unit_rule(order);
    GaussLegendre rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = mid + half * xs[i];
        rule.weights[i] = half * ws[i];
    }
    return rule;
}

double gbar(double s, const channel::DerivedParams& params, const channel::SystemConfig& cfg)
{
    if (s < 0.0) throw std::domain_error("gbar: s < 0");
    const double k = cfg.rician_k;
    const double m = cfg.m_elements;
    const double al = params.alpha;
    const double kp1 = k + 1.0;
    if (s == 0.0) return 0.0;
    const double lam_bar = al * k * m / kp1;         // LoS power of the block gain
    const double z = std::sqrt(4.0 * k * kp1 * m * s / al);
    // kp1/al * exp(-(s+lam_bar) kp1/al) (s/lam_bar)^{(M-1)/2} I_{M-1}(z), with
    // the Bessel exponential folded into the exponent for stability
    const double lg = -(s + lam_bar) * kp1 / al + z
                    + 0.5 * (m - 1.0) * (std::log(s) - std::log(lam_bar))
                    + std::log(mathfn::bessel_i_scaled(cfg.m_elements - 1, z));
    return kp1 / al * std::exp(lg);
}

namespace {

struct IaePieces {
    double first_arg = 0.0;   // sqrt(2/sigma_bar^2) |eta|
    double p1 = 0.0, p2 = 0.0;
    double scale = 0.0;       // gbar quadrature domain
    double s_hi = 0.0;
};

IaePieces iae_pieces(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                     double rate, const QuadratureSpec& quad)
{
    IaePieces p;
    p.first_arg = std::sqrt(2.0 / params.sigma_bar_sq) * params.eta_abs;
    p.p1 = params.p1(rate);
    p.p2 = params.p2(rate);
    p.scale = params.alpha / (2.0 * (cfg.rician_k + 1.0));
    p.s_hi = mathfn::ncx2_scaled_upper_quantile(quad.tail_mass, p.scale, 2 * cfg.m_elements,
                                                2.0 * cfg.rician_k * cfg.m_elements);
    return p;
}

double iae_once(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                int n_blocks, double rate, const QuadratureSpec& quad, int order)
{
    const auto pieces = iae_pieces(cfg, params, rate, quad);
    const auto rule = gauss_legendre(order, 0.0, pieces.s_hi);
    const double inv_sb2 = 2.0 / params.sigma_bar_sq;
    double j = 0.0;
    for (int i = 0; i < order; ++i) {
        const double s = rule.nodes[i];
        const double b = std::sqrt(inv_sb2 * (pieces.p1 * s + pieces.p2));
        const double cdf = 1.0 - marcum_q1(pieces.first_arg, b);
        j += rule.weights[i] * cdf * gbar(s, params, cfg);
    }
    j = std::clamp(j, 0.0, 1.0);
    return std::pow(j, n_blocks);
}

}  // namespace

double outage_iae(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                  const corrmodel::BlockPartition& partition, double rate,
                  const QuadratureSpec& quad)
{
    quad.validate();
    if (!(rate > 0.0)) return 0.0;
    const int b = partition.block_count();
    const double v1 = iae_once(cfg, params, b, rate, quad, quad.nodes_per_dim);
    const double v2 = iae_once(cfg, params, b, rate, quad, 2 * quad.nodes_per_dim);
    if (std::fabs(v1 - v2) > 1e-6) {
        throw QuadratureError("outage_iae: refinement did not stabilize (|delta|="
                              + std::to_string(std::fabs(v1 - v2)) + ")");
    }
    return v2;
}

namespace {

// One evaluation of the factorized block integral at fixed quadrature orders.
// The inner kernel G(r, s_b) is block-independent because mu_b = mu for all
// blocks; only the exponent L_b differs across blocks.
double bdma_once(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                 const corrmodel::BlockPartition& partition, double rate,
                 const QuadratureSpec& quad, int order, int inner_order)
{
    const double k = cfg.rician_k;
    const double kp1 = k + 1.0;
    const double m = cfg.m_elements;
    const double mu2 = cfg.mu_sq;
    const double al = params.alpha;
    const double sb2 = params.sigma_bar_sq;
    const double p1 = params.p1(rate), p2 = params.p2(rate);

    // outer r: Rician around |eta| with per-component std sigma_r
    const double sigma_r = std::sqrt(0.5 * sb2 * mu2);
    const double r_hi = mathfn::rician_upper_quantile(quad.tail_mass, params.eta_abs, sigma_r);
    const auto rule_r = gauss_legendre(order, 0.0, r_hi);

    // outer s_b: scaled noncentral chi, scale mu/sqrt(2) sqrt(al/(K+1)),
    // dof 2M, noncentrality sqrt(2KM)/mu
    const double c_chi = std::sqrt(0.5 * mu2 * al / kp1);
    const double lam_chi = std::sqrt(2.0 * k * m) / std::sqrt(mu2);
    const double sb_hi = mathfn::ncchi_scaled_upper_quantile(quad.tail_mass, c_chi,
                                                             2 * cfg.m_elements, lam_chi);
    const auto rule_s = gauss_legendre(order, 0.0, sb_hi);

    const double c1 = std::sqrt(2.0 / (sb2 * (1.0 - mu2)));
    const double c_cond = al * (1.0 - mu2) / (2.0 * kp1);    // conditional ncx2 scale

    // kernel column G(:, j) for each s_b node, in parallel
    std::vector<std::vector<double>> g_cols(order);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int j = next.fetch_add(1);
            if (j >= order) return;
            const double s_b = rule_s.nodes[j];
            const double lam_u = s_b * s_b / c_cond;
            const double u_lo = mathfn::ncx2_scaled_lower_quantile(quad.tail_mass, c_cond,
                                                                   2 * cfg.m_elements, lam_u);
            const double u_hi = mathfn::ncx2_scaled_upper_quantile(quad.tail_mass, c_cond,
                                                                   2 * cfg.m_elements, lam_u);
            const auto rule_u = gauss_legendre(inner_order, u_lo, u_hi);
            std::vector<double> wpdf(inner_order), bq(inner_order);
            for (int t = 0; t < inner_order; ++t) {
                wpdf[t] = rule_u.weights[t] *
                          mathfn::ncx2_scaled_pdf(rule_u.nodes[t], c_cond, 2 * cfg.m_elements, lam_u);
                bq[t] = c1 * std::sqrt(p1 * rule_u.nodes[t] + p2);
            }
            auto& col = g_cols[j];
            col.resize(order);
            for (int i = 0; i < order; ++i) {
                const double a_q = c1 * rule_r.nodes[i];
                double acc = 0.0;
                for (int t = 0; t < inner_order; ++t) {
                    acc += wpdf[t] * (1.0 - marcum_q1(a_q, bq[t]));
                }
                col[i] = std::clamp(acc, 0.0, 1.0);
            }
        }
    };
    for (unsigned t = 0; t < hw; ++t) futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();

    // outer weights
    std::vector<double> w_r(order), w_s(order);
    for (int i = 0; i < order; ++i) {
        w_r[i] = rule_r.weights[i] * mathfn::rician_pdf(rule_r.nodes[i], params.eta_abs, sigma_r);
    }
    for (int j = 0; j < order; ++j) {
        w_s[j] = rule_s.weights[j] *
                 mathfn::ncchi_scaled_pdf(rule_s.nodes[j], c_chi, 2 * cfg.m_elements, lam_chi);
    }

    // blocks multiplied in index order (deterministic reduction)
    double pout = 1.0;
    for (int lb : partition.block_sizes) {
        double acc = 0.0;
        for (int j = 0; j < order; ++j) {
            const auto& col = g_cols[j];
            double inner = 0.0;
            for (int i = 0; i < order; ++i) {
                inner += w_r[i] * std::pow(col[i], lb);
            }
            acc += w_s[j] * inner;
        }
        pout *= std::clamp(acc, 0.0, 1.0);
    }
    return pout;
}

}  // namespace

double outage_bdma(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                   const corrmodel::BlockPartition& partition, double rate,
                   const QuadratureSpec& quad)
{
    quad.validate();
    if (!(rate > 0.0)) return 0.0;
    const double v1 = bdma_once(cfg, params, partition, rate, quad,
                                quad.nodes_per_dim, quad.inner_nodes);
    const double v2 = bdma_once(cfg, params, partition, rate, quad,
                                2 * quad.nodes_per_dim, 2 * quad.inner_nodes);
    if (std::fabs(v1 - v2) > 1e-6) {
        throw QuadratureError("outage_bdma: refinement did not stabilize (|delta|="
                              + std::to_string(std::fabs(v1 - v2)) + ")");
    }
    return v2;
}

}  // namespace fasaris::outage
