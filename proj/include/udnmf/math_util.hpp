#pragma once

#include <cstdint>
#include <functional>

namespace udnmf {

inline constexpr double euler_gamma = 0.57721566490153286;

// Mixes a 64-bit seed into a well-distributed stream value; used to derive
// independent per-trial seeds from one master seed.
std::uint64_t splitmix64(std::uint64_t x);

// Principal branch W0 of w * exp(w) = y for y >= 0.
// Residual |w e^w - y| <= 1e-12 * max(1, y). Throws domain_error for y < 0
// (the simulator never needs the branch below the origin).
double lambert_w0(double y);

// log I0(x) for x >= 0, Bessel I0 in log space so large arguments do not overflow.
double log_bessel_i0(double x);

// Adaptive Simpson quadrature on [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 60);

}  // namespace udnmf
