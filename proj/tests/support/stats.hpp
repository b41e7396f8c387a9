#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "udnmf/channel.hpp"
#include "udnmf/rng.hpp"

// Independent statistical machinery for the test suites. Everything here is
// implemented from textbook definitions, deliberately not reusing the library
// code it is used to check.
namespace testsupport {

// regularized lower incomplete gamma P(a, x)
double gamma_p(double a, double x);

// chi-square upper tail probability with k degrees of freedom
double chi_square_sf(double x, int k);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// goodness of fit against expected counts; adjacent bins are merged until
// every expected count reaches 5
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected);

// two-sided Kolmogorov-Smirnov distance against a reference CDF
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// asymptotic 1% critical value for the KS distance
double ks_critical_1pct(std::size_t n);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

// Marcum Q1(a, b) via the Poisson mixture of central chi-square tails
double marcum_q1(double a, double b);

// Rice(nu, s) distribution function, built on Marcum Q
double rice_cdf(double x, double nu, double s);

// E[log X] for a noncentral chi-square with 2 dof and noncentrality delta:
// log 2 - gamma + sum_k pois(k; delta/2) H_k
double noncentral_chisq2_log_moment(double delta);

// E[log |g|] for Rice(nu, s) through the series above (|g|^2 = s^2 X)
double rice_log_moment_series(double nu, double s);

// fixed-order Gauss-Legendre quadrature on [a, b], 64 nodes per panel
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 8);

// one Euler-Maruyama step of the fading SDE; the biased reference scheme the
// exact transition sampler is compared against
udnmf::FadingState em_step(const udnmf::FadingState& s, double dt,
                           const udnmf::FadingParams& p, udnmf::rng_t& rng);

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    std::size_t count = 0;
};

MomentSummary summarize(const std::vector<double>& xs);

}  // namespace testsupport
