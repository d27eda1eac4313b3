// SPDX-License-Identifier: Apache-2.0
//
// Special functions and probability densities used by the outage and
// throughput engines: modified Bessel I, first-order Marcum Q, Gaussian Q,
// the ratio psi(t) = I1(t)/(t I0(t)) with its inverse, and the scaled
// non-central chi-squared / chi / Rician laws (pdf, cdf, tail quantiles).
//
// All functions are pure and thread-safe.

#pragma once

#include <vector>

namespace fasaris::mathfn {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_terms = 10000;
};

// Exponentially scaled modified Bessel function e^{-x} I_nu(x), nu >= 0, x >= 0.
double bessel_i_scaled(int nu, double x);

// Sequence e^{-x} I_k(x) for k = 0..kmax in one downward-recurrence pass.
std::vector<double> bessel_i_scaled_seq(double x, int kmax);

// Unscaled I_nu(x). Throws std::overflow_error when e^{x} is not
// representable; use bessel_i_scaled there instead.
double bessel_i(int nu, double x);

// First-order Marcum Q: Q1(a,b) = P[ |LoS a + CN(0,2)| > b ], a,b >= 0.
// Monotone non-decreasing in a, non-increasing in b; Q1(a,0) = 1.
double marcum_q1(double a, double b, const Tolerance& tol = {});

// Gaussian tail Q(x) = P[N(0,1) > x].
double gaussian_q(double x);

// psi(t) = I1(t) / (t I0(t)), strictly decreasing from 1/2 (t->0) to 0.
double psi(double t);

// Inverse of psi on (0, 1/2); bisection, unconditionally convergent.
double psi_inv(double y);

// pdf of scale * Y where Y ~ chi^2_dof(noncentrality), dof a positive even
// integer. scale > 0, x >= 0.
double ncx2_scaled_pdf(double x, double scale, int dof, double noncentrality);
double ncx2_scaled_cdf(double x, double scale, int dof, double noncentrality);

// x such that P[scale*Y > x] = tail (upper) or P[scale*Y < x] = tail (lower).
double ncx2_scaled_upper_quantile(double tail, double scale, int dof, double noncentrality);
double ncx2_scaled_lower_quantile(double tail, double scale, int dof, double noncentrality);

// pdf of scale * Z where Z ~ noncentral chi with `dof` degrees of freedom and
// noncentrality lambda (amplitude domain, Z = sqrt(chi^2_dof(lambda^2))).
double ncchi_scaled_pdf(double x, double scale, int dof, double noncentrality);
double ncchi_scaled_cdf(double x, double scale, int dof, double noncentrality);
double ncchi_scaled_upper_quantile(double tail, double scale, int dof, double noncentrality);

// Rician density of |nu + CN(0, 2 sigma^2)| with per-component std sigma.
double rician_pdf(double r, double nu, double sigma);
double rician_cdf(double r, double nu, double sigma);   // 1 - Q1(nu/sigma, r/sigma)
double rician_upper_quantile(double tail, double nu, double sigma);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace fasaris::mathfn
