// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles used by the tests. These deliberately avoid the
// library's evaluation paths: plain long-double power series and adaptive
// Simpson quadrature only.

#pragma once

#include <cmath>
#include <functional>

namespace oracles {

// sum_{j} (x/2)^{nu+2j} / (j! (nu+j)!), evaluated in long double.
inline long double bessel_i_series(int nu, long double x)
{
    long double term = 1.0L;
    for (int j = 1; j <= nu; ++j) term *= 0.5L * x / j;
    long double sum = term;
    const long double u = 0.25L * x * x;
    for (int j = 1; j < 400; ++j) {
        term *= u / (static_cast<long double>(j) * (j + nu));
        sum += term;
        if (term < sum * 1e-24L) break;
    }
    return sum;
}

inline long double bessel_i_scaled_series(int nu, long double x)
{
    return bessel_i_series(nu, x) * std::exp(-x);
}

// J0 by its alternating series; fine for |x| <= ~40 in long double.
inline long double bessel_j0_series(long double x)
{
    const long double u = 0.25L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int j = 1; j < 200; ++j) {
        term *= -u / (static_cast<long double>(j) * j);
        sum += term;
        if (std::fabs(term) < 1e-26L) break;
    }
    return sum;
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-12, int depth = 40)
{
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Q1(a,b) = int_b^inf t exp(-(t-a)^2/2) e^{-at} I0(at) dt, via the scaled
// series (valid while a*t stays within long-double exp range).
inline double marcum_q1_quadrature(double a, double b)
{
    auto integrand = [&](double t) -> double {
        const long double i0e = bessel_i_scaled_series(0, static_cast<long double>(a) * t);
        const long double d = static_cast<long double>(t) - a;
        return static_cast<double>(t * std::exp(-0.5L * d * d) * i0e);
    };
    const double hi = std::max(b, a) + 45.0;
    if (hi <= b) return 0.0;
    return adaptive_simpson(integrand, b, hi, 1e-13);
}

inline double gaussian_q_quadrature(double x)
{
    auto density = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    return adaptive_simpson(density, x, x + 42.0, 1e-14);
}

}  // namespace oracles
