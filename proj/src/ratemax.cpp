// SPDX-License-Identifier: Apache-2.0

#include "fasaris/ratemax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fasaris/mathfn.hpp"
#include "fasaris/outage.hpp"

namespace fasaris::ratemax {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSqrt2Pi = 2.5066282746310002;

double rate_of_x(double x) { return std::log2(1.0 + x); }
double x_of_rate(double r) { return std::exp2(r) - 1.0; }

// ((1/a) psi^{-1}(1/a^2))^2, shared by both region boundaries
double boundary_constant(const channel::DerivedParams& params)
{
    const double a2 = params.a * params.a;
    if (a2 <= 2.0 + 1e-9) {
        throw std::domain_error("ratemax: a^2 = 2KM must exceed 2 for the region boundaries; "
                                "increase the K*M product");
    }
    const double t = mathfn::psi_inv(1.0 / a2);
    return (t / params.a) * (t / params.a);
}

}  // namespace

double throughput(double rate, const channel::SystemConfig& cfg,
                  const channel::DerivedParams& params,
                  const corrmodel::BlockPartition& partition,
                  const outage::QuadratureSpec& quad)
{
    if (rate < 0.0) throw std::domain_error("throughput: negative rate");
    if (rate == 0.0) return 0.0;
    return rate * (1.0 - outage::outage_iae(cfg, params, partition, rate, quad));
}

double resolve_u_cap(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
                     const RateOptOptions& opts, const outage::QuadratureSpec& quad)
{
    (void)quad;
    if (opts.u_cap_norm > 0.0) {
        return opts.u_cap_norm * params.alpha / (cfg.rician_k + 1.0);
    }
    const double scale = params.alpha / (2.0 * (cfg.rician_k + 1.0));
    return mathfn::ncx2_scaled_upper_quantile(opts.u_tail_mass, scale, 2 * cfg.m_elements,
                                              2.0 * cfg.rician_k * cfg.m_elements);
}

double lambda0(const channel::DerivedParams& params, double u_cap)
{
    if (!(u_cap > 0.0)) throw std::domain_error("lambda0: U must be positive");
    return boundary_constant(params) / (params.p1_bar * u_cap + params.p2_bar);
}

double lambda1(const channel::DerivedParams& params)
{
    return boundary_constant(params) / params.p2_bar;
}

double omega(const channel::SystemConfig& cfg, const channel::DerivedParams& params,
             double x_ref, const outage::QuadratureSpec& quad)
{
    if (!(x_ref > 0.0)) throw std::domain_error("omega: x_ref must be positive");
    quad.validate();
    const double scale = params.alpha / (2.0 * (cfg.rician_k + 1.0));
    const double ncp = 2.0 * cfg.rician_k * cfg.m_elements;
    const double hi = mathfn::ncx2_scaled_upper_quantile(quad.tail_mass, scale,
                                                         2 * cfg.m_elements, ncp);
    const auto rule = outage::gauss_legendre(2 * quad.nodes_per_dim, 0.0, hi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        const double root = std::sqrt(params.p1_bar * s + params.p2_bar);
        const double shift = std::sqrt((params.p1_bar * s + params.p2_bar) * x_ref) - params.a;
        const double tilt = 0.5 * std::sqrt(root / params.a) * std::exp(-0.5 * shift * shift);
        const double w = rule.weights[i] * tilt * outage::gbar(s, params, cfg);
        num += w * root;
        den += w;
    }
    if (!(den > 0.0)) throw outage::QuadratureError("omega: degenerate tilt weight");
    return num / den;
}

double d_omega(double omega_value, double x)
{
    const double l2 = std::log2(1.0 + x);
    return std::pow(x, 0.25) / ((1.0 + x) * kLn2)
         + 0.25 * std::pow(x, -0.75) * l2
         - omega_value / (kSqrt2Pi * std::pow(x, 0.25)) * l2;
}

namespace {

double d_omega_prime(double om, double x)
{
    const double l2 = std::log2(1.0 + x);
    const double dl2 = 1.0 / ((1.0 + x) * kLn2);
    const double t1 = (0.25 * std::pow(x, -0.75) * (1.0 + x) - std::pow(x, 0.25))
                    / ((1.0 + x) * (1.0 + x) * kLn2);
    const double t2 = -0.1875 * std::pow(x, -1.75) * l2 + 0.25 * std::pow(x, -0.75) * dl2;
    const double t3 = -om / kSqrt2Pi * (-0.25 * std::pow(x, -1.25) * l2
                                        + std::pow(x, -0.25) * dl2);
    return t1 + t2 + t3;
}

}  // namespace

std::optional<double> newton_root_domega(double omega_value, double lo, double hi,
                                         int max_iters, int* iters_used)
{
    if (iters_used) *iters_used = 0;
    if (!(omega_value > 0.0)) throw std::domain_error("newton_root_domega: omega must be positive");
    if (!(lo > 0.0)) lo = 1e-12;
    // D goes to 0+ at the origin and 0- at infinity; bracket the crossing.
    while (d_omega(omega_value, hi) > 0.0 && hi < 1e15) hi *= 2.0;
    if (d_omega(omega_value, hi) > 0.0) return std::nullopt;
    if (d_omega(omega_value, lo) < 0.0) {
        // already past the crossing: monotone-decreasing on [lo, inf)
        return std::nullopt;
    }
    double x = std::sqrt(lo * hi);
    int it = 0;
    for (; it < max_iters; ++it) {
        const double f = d_omega(omega_value, x);
        if (f > 0.0) lo = x; else hi = x;
        const double step = f / d_omega_prime(omega_value, x);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = std::sqrt(lo * hi);   // bisection fallback
        if (std::fabs(xn - x) < 1e-8 * std::max(1.0, x) && std::fabs(f) < 1e-8) {
            x = xn;
            break;
        }
        x = xn;
    }
    if (iters_used) *iters_used = it;
    return x;
}

RateSearchResult optimize_rate(const channel::SystemConfig& cfg,
                               const channel::DerivedParams& params,
                               const corrmodel::BlockPartition& partition,
                               const outage::QuadratureSpec& quad,
                               const RateOptOptions& opts)
{
    RateSearchResult res;
    res.u_cap = resolve_u_cap(cfg, params, opts, quad);
    res.lambda0 = lambda0(params, res.u_cap);
    res.lambda1 = lambda1(params);

    auto t_of_x = [&](double x) {
        ++res.outage_evals;
        return throughput(rate_of_x(x), cfg, params, partition, quad);
    };
    auto dt_of_x = [&](double x) {
        const double h = std::max(1e-6, 1e-6 * x);
        return (t_of_x(x + h) - t_of_x(std::max(x - h, 1e-12))) / (2.0 * h);
    };

    // region 1: concave head (0, Lambda0]
    double x1;
    if (dt_of_x(res.lambda0) >= 0.0) {
        x1 = res.lambda0;
    } else {
        double x = 0.5 * res.lambda0;
        double step = 0.1 * res.lambda0;
        double fx = t_of_x(x);
        for (; res.gradient_iters < opts.max_gradient_iters; ++res.gradient_iters) {
            const double g = dt_of_x(x);
            double xn = std::clamp(x + step * g, 1e-12, res.lambda0);
            double fn = t_of_x(xn);
            int backtracks = 0;
            while (fn < fx && backtracks < 40) {
                step *= 0.5;
                xn = std::clamp(x + step * g, 1e-12, res.lambda0);
                fn = t_of_x(xn);
                ++backtracks;
            }
            const bool done = std::fabs(xn - x) < 1e-8 * std::max(1.0, x);
            x = xn;
            fx = fn;
            if (done) break;
        }
        x1 = x;
    }

    // region 2: x** = max(Lambda1, x_omega)
    res.omega = omega(cfg, params, opts.omega_x_ref_scale * res.lambda1, quad);
    const auto root = newton_root_domega(res.omega, 1e-9, std::max(1.0, res.lambda1),
                                         opts.max_newton_iters, &res.newton_iters);
    res.x_omega = root;
    const double x2 = std::max(res.lambda1, root.value_or(res.lambda1));

    // region 3: log-spaced grid over [Lambda0, Lambda1] + golden refinement
    const int ng = std::max(2, opts.grid_points);
    double best_x = res.lambda0, best_t = -1.0;
    int best_i = 0;
    const double ratio = res.lambda1 / res.lambda0;
    std::vector<double> gx(ng);
    for (int i = 0; i < ng; ++i) {
        gx[i] = res.lambda0 * std::pow(ratio, static_cast<double>(i) / (ng - 1));
        const double t = t_of_x(gx[i]);
        if (t > best_t) {
            best_t = t;
            best_x = gx[i];
            best_i = i;
        }
    }
    {
        double lo = gx[std::max(0, best_i - 1)];
        double hi = gx[std::min(ng - 1, best_i + 1)];
        const double gr = 0.6180339887498949;
        double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
        double f1 = t_of_x(c1), f2 = t_of_x(c2);
        while (hi - lo > 1e-6 * std::max(1.0, hi)) {
            if (f1 < f2) {
                lo = c1;
                c1 = c2;
                f1 = f2;
                c2 = lo + gr * (hi - lo);
                f2 = t_of_x(c2);
            } else {
                hi = c2;
                c2 = c1;
                f2 = f1;
                c1 = hi - gr * (hi - lo);
                f1 = t_of_x(c1);
            }
        }
        best_x = 0.5 * (lo + hi);
    }

    res.r_star = rate_of_x(x1);
    res.r_star2 = rate_of_x(x2);
    res.r_star3 = rate_of_x(best_x);
    res.t_star = t_of_x(x1);
    res.t_star2 = t_of_x(x2);
    res.t_star3 = t_of_x(best_x);

    // argmax over the three candidates, earliest wins ties, then clamp
    double r_o = res.r_star, t_o = res.t_star;
    if (res.t_star2 > t_o) { r_o = res.r_star2; t_o = res.t_star2; }
    if (res.t_star3 > t_o) { r_o = res.r_star3; t_o = res.t_star3; }
    res.r_final = std::clamp(r_o, cfg.rate_min, cfg.rate_max);
    res.t_final = res.r_final > 0.0 ? t_of_x(x_of_rate(res.r_final)) : 0.0;
    return res;
}

}  // namespace fasaris::ratemax
