// SPDX-License-Identifier: Apache-2.0

#include "fasaris/mathfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fasaris::mathfn {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Power-series branch for e^{-x} I_k(x), adequate for x <= 2.
double scaled_series_single(int nu, double x)
{
    const double u = 0.25 * x * x;
    double term = 1.0;
    for (int j = 1; j <= nu; ++j) term *= 0.5 * x / j;   // (x/2)^nu / nu!
    double sum = term;
    for (int j = 1; j < 60; ++j) {
        term *= u / (j * (j + nu));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum * std::exp(-x);
}

}  // namespace

std::vector<double> bessel_i_scaled_seq(double x, int kmax)
{
    if (x < 0.0) throw std::domain_error("bessel_i_scaled_seq: x < 0");
    if (kmax < 0) kmax = 0;
    std::vector<double> out(kmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x <= 2.0) {
        for (int k = 0; k <= kmax; ++k) out[k] = scaled_series_single(k, x);
        return out;
    }
    // Miller downward recurrence: I_{k-1} = I_{k+1} + (2k/x) I_k, normalized
    // with e^{x} = I_0 + 2 sum_{k>=1} I_k  (equals 1 for the scaled sequence).
    // The start index must cover the normalization mass, which extends to
    // k ~ sqrt(83 x) regardless of how many orders the caller asked for.
    const int start = std::max(kmax, static_cast<int>(std::ceil(std::sqrt(90.0 * x))))
                    + static_cast<int>(std::ceil(2.0 * std::sqrt(kmax + x))) + 40;
    double fp = 0.0;         // f_{k+1}
    double fc = 1e-280;      // f_k, arbitrary seed
    double norm = 2.0 * fc;  // running f_0 + 2 sum_{k>=1} f_k
    const double big = 1e250;
    for (int k = start; k >= 1; --k) {
        const double fm = fp + (2.0 * k / x) * fc;   // f_{k-1}
        fp = fc;
        fc = fm;
        norm += (k - 1 >= 1) ? 2.0 * fc : fc;
        if (k - 1 <= kmax) out[k - 1] = fc;
        if (std::abs(fc) > big) {
            const double inv = 1.0 / big;
            fc *= inv;
            fp *= inv;
            norm *= inv;
            for (double& v : out) v *= inv;
        }
    }
    const double scale = 1.0 / norm;
    for (double& v : out) v *= scale;
    return out;
}

double bessel_i_scaled(int nu, double x)
{
    if (nu < 0) throw std::domain_error("bessel_i_scaled: nu < 0");
    if (x < 0.0) throw std::domain_error("bessel_i_scaled: x < 0");
    if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
    if (x <= 2.0) return scaled_series_single(nu, x);
    return bessel_i_scaled_seq(x, nu)[nu];
}

double bessel_i(int nu, double x)
{
    const double s = bessel_i_scaled(nu, x);
    if (x < 700.0) return s * std::exp(x);
    if (s <= 0.0 || std::log(s) + x > 709.0) {
        throw std::overflow_error("bessel_i: unscaled I_nu overflows, use bessel_i_scaled");
    }
    return std::exp(std::log(s) + x);
}

double marcum_q1(double a, double b, const Tolerance& tol)
{
    if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q1: negative argument");
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    const double d = a - b;
    // exp(-(a-b)^2/2) underflows past |a-b| ~ 38.6; the result saturates.
    if (d <= -39.0) return 0.0;
    if (d >= 39.0) return 1.0;

    const double z = a * b;
    // Terms ratio^k e^{-z} I_k(z) decay once k^2/(2z) + k log(1/ratio) is large.
    int kmax = 12 + static_cast<int>(std::ceil(std::sqrt(85.0 * z)));
    kmax = std::min(kmax, tol.max_terms);
    const std::vector<double> ik = bessel_i_scaled_seq(z, kmax);
    const double env = std::exp(-0.5 * d * d);

    if (b >= a) {
        // Q1 = e^{-(a^2+b^2)/2} sum_{k>=0} (a/b)^k I_k(ab); terms decrease.
        const double r = a / b;
        double rk = 1.0, sum = 0.0;
        for (int k = 0; k <= kmax; ++k) {
            const double t = rk * ik[k];
            sum += t;
            if (t < sum * 1e-17) break;
            rk *= r;
        }
        return std::clamp(env * sum, 0.0, 1.0);
    }
    // Complementary series avoids cancellation when Q1 is near 1:
    // 1 - Q1 = e^{-(a^2+b^2)/2} sum_{k>=1} (b/a)^k I_k(ab).
    const double r = b / a;
    double rk = r, sum = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double t = rk * ik[k];
        sum += t;
        if (t < sum * 1e-17) break;
        rk *= r;
    }
    return std::clamp(1.0 - env * sum, 0.0, 1.0);
}

double gaussian_q(double x)
{
    return 0.5 * std::erfc(x / kSqrt2);
}

double psi(double t)
{
    if (t <= 0.0) throw std::domain_error("psi: t must be positive");
    if (t < 1e-4) {
        const double u = 0.25 * t * t;
        const double i1_over_t = 0.5 * (1.0 + u / 2.0 + u * u / 12.0);
        const double i0 = 1.0 + u + 0.25 * u * u;
        return i1_over_t / i0;
    }
    return bessel_i_scaled(1, t) / (t * bessel_i_scaled(0, t));
}

double psi_inv(double y)
{
    if (!(y > 0.0 && y < 0.5)) throw std::domain_error("psi_inv: y must lie in (0, 1/2)");
    double lo = 1e-8;
    double hi = std::max(4.0, 2.0 / y);     // psi(t) < 1/t, so psi(hi) < y
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) > y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

void check_ncx2_args(double scale, int dof, double lam, const char* who)
{
    if (scale <= 0.0) throw std::domain_error(std::string(who) + ": scale must be positive");
    if (dof <= 0 || dof % 2 != 0) throw std::domain_error(std::string(who) + ": dof must be a positive even integer");
    if (lam < 0.0) throw std::domain_error(std::string(who) + ": negative noncentrality");
}

}  // namespace

double ncx2_scaled_pdf(double x, double scale, int dof, double noncentrality)
{
    check_ncx2_args(scale, dof, noncentrality, "ncx2_scaled_pdf");
    if (x < 0.0) throw std::domain_error("ncx2_scaled_pdf: x < 0");
    const int m = dof / 2;
    const double y = x / scale;
    if (noncentrality < 1e-12) {
        // central chi-squared
        if (x == 0.0) return dof == 2 ? 0.5 / scale : 0.0;
        const double lg = -0.5 * y + (m - 1) * std::log(0.5 * y) - std::lgamma(m);
        return 0.5 * std::exp(lg) / scale;
    }
    if (x == 0.0) return dof == 2 ? 0.5 * std::exp(-0.5 * noncentrality) / scale : 0.0;
    const double z = std::sqrt(noncentrality * y);
    const double lg = -0.5 * (std::sqrt(y) - std::sqrt(noncentrality)) * (std::sqrt(y) - std::sqrt(noncentrality))
                    + 0.5 * (m - 1) * (std::log(y) - std::log(noncentrality))
                    + std::log(bessel_i_scaled(m - 1, z));
    return 0.5 * std::exp(lg) / scale;
}

double gamma_p(double a, double x)
{
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // series representation
        double ap = a, del = 1.0 / a, sum = del;
        for (int i = 0; i < 10000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    return 1.0 - gamma_q(a, x);
}

double gamma_q(double a, double x)
{
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p(a, x);
    // Lentz continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double ncx2_scaled_cdf(double x, double scale, int dof, double noncentrality)
{
    check_ncx2_args(scale, dof, noncentrality, "ncx2_scaled_cdf");
    if (x <= 0.0) return 0.0;
    const int m = dof / 2;
    const double y = 0.5 * x / scale;
    const double del = 0.5 * noncentrality;
    if (del < 1e-300) return gamma_p(m, y);

    // Poisson mixture of central chi-squared CDFs, summed outward from the
    // Poisson mode in both directions (Benton & Krishnamoorthy 2003).
    const int j0 = static_cast<int>(del);
    double pois = std::exp(-del + j0 * std::log(del) - std::lgamma(j0 + 1.0));
    double gam = gamma_p(m + j0, y);
    // derivative term t_j = y^{m+j} e^{-y} / Gamma(m+j+1)
    double t = std::exp(-y + (m + j0) * std::log(y) - std::lgamma(m + j0 + 1.0));
    double sum = pois * gam;

    double pf = pois, gf = gam, tf = t;
    for (int j = j0; j < j0 + 100000; ++j) {
        pf *= del / (j + 1);
        gf -= tf;
        if (gf <= 0.0) break;   // gf is non-increasing; every further term is 0
        tf *= y / (m + j + 1);
        const double term = pf * gf;
        sum += term;
        if (term < sum * 1e-16) break;
    }
    double pb = pois, gb = gam, tb = t * (m + j0) / y;
    for (int j = j0 - 1; j >= 0; --j) {
        pb *= (j + 1) / del;
        gb += tb;
        tb *= (m + j) / y;
        const double term = pb * gb;
        sum += term;
        if (term < sum * 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

double bisect_cdf(double target, double lo, double hi, const auto& cdf)
{
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double ncx2_scaled_upper_quantile(double tail, double scale, int dof, double noncentrality)
{
    check_ncx2_args(scale, dof, noncentrality, "ncx2_scaled_upper_quantile");
    if (!(tail > 0.0 && tail < 1.0)) throw std::domain_error("ncx2_scaled_upper_quantile: tail in (0,1)");
    const double mean = scale * (dof + noncentrality);
    const double sd = scale * std::sqrt(2.0 * (dof + 2.0 * noncentrality));
    double hi = mean + 8.0 * sd;
    while (ncx2_scaled_cdf(hi, scale, dof, noncentrality) < 1.0 - tail) hi *= 1.5;
    return bisect_cdf(1.0 - tail, 0.0, hi,
                      [&](double v) { return ncx2_scaled_cdf(v, scale, dof, noncentrality); });
}

double ncx2_scaled_lower_quantile(double tail, double scale, int dof, double noncentrality)
{
    check_ncx2_args(scale, dof, noncentrality, "ncx2_scaled_lower_quantile");
    if (!(tail > 0.0 && tail < 1.0)) throw std::domain_error("ncx2_scaled_lower_quantile: tail in (0,1)");
    const double mean = scale * (dof + noncentrality);
    return bisect_cdf(tail, 0.0, mean,
                      [&](double v) { return ncx2_scaled_cdf(v, scale, dof, noncentrality); });
}

double ncchi_scaled_pdf(double x, double scale, int dof, double noncentrality)
{
    check_ncx2_args(scale, dof, noncentrality, "ncchi_scaled_pdf");
    if (x < 0.0) throw std::domain_error("ncchi_scaled_pdf: x < 0");
    if (x == 0.0) return 0.0;
    const int m = dof / 2;
    const double z = x / scale;
    const double lam = noncentrality;
    if (lam < 1e-12) {
        // central chi: z^{dof-1} e^{-z^2/2} / (2^{dof/2-1} Gamma(dof/2))
        const double lg = (dof - 1) * std::log(z) - 0.5 * z * z
                        - (m - 1) * std::log(2.0) - std::lgamma(m);
        return std::exp(lg) / scale;
    }
    const double lg = -0.5 * (z - lam) * (z - lam)
                    + 0.5 * dof * std::log(z) + (1.0 - 0.5 * dof) * std::log(lam)
                    + std::log(bessel_i_scaled(m - 1, lam * z));
    return std::exp(lg) / scale;
}

double ncchi_scaled_cdf(double x, double scale, int dof, double noncentrality)
{
    if (x <= 0.0) return 0.0;
    return ncx2_scaled_cdf(x * x, scale * scale, dof, noncentrality * noncentrality);
}

double ncchi_scaled_upper_quantile(double tail, double scale, int dof, double noncentrality)
{
    const double q = ncx2_scaled_upper_quantile(tail, scale * scale, dof,
                                                noncentrality * noncentrality);
    return std::sqrt(q);
}

double rician_pdf(double r, double nu, double sigma)
{
    if (sigma <= 0.0) throw std::domain_error("rician_pdf: sigma must be positive");
    if (nu < 0.0) throw std::domain_error("rician_pdf: negative LoS amplitude");
    if (r < 0.0) throw std::domain_error("rician_pdf: r < 0");
    if (r == 0.0) return 0.0;
    const double s2 = sigma * sigma;
    const double d = (r - nu) / sigma;
    return r / s2 * std::exp(-0.5 * d * d) * bessel_i_scaled(0, r * nu / s2);
}

double rician_cdf(double r, double nu, double sigma)
{
    if (sigma <= 0.0) throw std::domain_error("rician_cdf: sigma must be positive");
    if (r <= 0.0) return 0.0;
    return 1.0 - marcum_q1(nu / sigma, r / sigma);
}

double rician_upper_quantile(double tail, double nu, double sigma)
{
    if (!(tail > 0.0 && tail < 1.0)) throw std::domain_error("rician_upper_quantile: tail in (0,1)");
    double hi = nu + sigma * (8.0 + std::sqrt(2.0 * std::log(1.0 / tail)));
    while (rician_cdf(hi, nu, sigma) < 1.0 - tail) hi *= 1.5;
    return bisect_cdf(1.0 - tail, 0.0, hi,
                      [&](double v) { return rician_cdf(v, nu, sigma); });
}

}  // namespace fasaris::mathfn
