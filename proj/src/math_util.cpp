#include "udnmf/math_util.hpp"

#include <cmath>
#include <limits>

#include "udnmf/errors.hpp"

namespace udnmf {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double lambert_w0(double y) {
    if (std::isnan(y) || y < 0.0)
        throw domain_error("lambert_w0: argument must be >= 0");
    if (y == 0.0) return 0.0;

    if (y < 0.5) {
        // Halley on f(w) = w e^w - y; seed from the series w ~ y(1 - y).
        double w = y * (1.0 - y);
        for (int i = 0; i < 50; ++i) {
            double ew = std::exp(w);
            double f = w * ew - y;
            double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
            double dw = f / denom;
            w -= dw;
            if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
        }
        return w;
    }

    // Large arguments: solve ln w + w = ln y, which never overflows.
    double ly = std::log(y);
    double w = ly > 1.0 ? ly - std::log(ly) : 0.5672;
    if (w <= 0.0) w = 0.5672;
    for (int i = 0; i < 100; ++i) {
        double f = std::log(w) + w - ly;
        double dw = f / (1.0 / w + 1.0);
        w -= dw;
        if (w <= 0.0) w = 1e-300;
        if (std::abs(dw) <= 1e-15 * std::abs(w)) break;
    }
    return w;
}

double log_bessel_i0(double x) {
    if (x < 0.0) x = -x;
    if (x <= 600.0) {
        // cyl_bessel_i stays finite here (I0(600) ~ 1e259).
        return std::log(std::cyl_bessel_i(0.0, x));
    }
    // Asymptotic: I0(x) ~ e^x / sqrt(2 pi x) * (1 + 1/(8x) + 9/(128 x^2) + ...).
    double r = 1.0 / x;
    double series = 1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875 +
                    r * (0.112152099609375 + r * 0.227108001708984375))));
    return x - 0.5 * std::log(2.0 * M_PI * x) + std::log(series);
}

namespace {

double simpson_rule(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_rule(fa, flm, fm, m - a);
    double right = simpson_rule(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = simpson_rule(fa, fm, fb, b - a);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace udnmf
