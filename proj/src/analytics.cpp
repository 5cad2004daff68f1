#include "limloc/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace limloc {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double prob_E_exact(double t, double c) {
    if (!(t > 0.0) || !(c > 0.0))
        throw std::invalid_argument("prob_E_exact: t and c must be > 0");
    return 2.0 * normal_cdf(c / std::sqrt(t)) - 1.0;
}

double prob_Eprime(double t, double allowance) {
    if (!(t > 0.0) || !(allowance > 0.0))
        throw std::invalid_argument("prob_Eprime: t and allowance must be > 0");
    return -std::expm1(-allowance * std::sqrt(2.0 / (M_PI * t)));
}

double hitting_density(double x, double t) {
    if (x == 0.0) throw std::invalid_argument("hitting_density: x must be nonzero");
    if (!(t > 0.0)) throw std::invalid_argument("hitting_density: t must be > 0");
    const double ax = std::fabs(x);
    return ax * std::pow(t, -1.5) * std::exp(-x * x / (2.0 * t)) /
           std::sqrt(2.0 * M_PI);
}

double arcsine_cdf(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("arcsine_cdf: x must be in [0, 1]");
    return (2.0 / M_PI) * std::asin(std::sqrt(x));
}

double g_tail(double A) {
    if (!(A >= 1.0)) throw std::invalid_argument("g_tail: A must be >= 1 (use g_head below 1)");
    return 0.5 / std::sqrt(A);
}

double g_head(double A) {
    if (!(A > 0.0 && A <= 1.0))
        throw std::invalid_argument("g_head: A must be in (0, 1]");
    return 0.5 * std::sqrt(A);
}

std::string DensityGrid::to_csv() const {
    std::string out = "x,density\n";
    char buf[64];
    for (std::size_t i = 0; i < abscissae.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", abscissae[i], values[i]);
        out += buf;
    }
    return out;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& fn, double a, double b,
             double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(fn, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(fn, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol) {
    const double m = 0.5 * (a + b);
    const double fa = fn(a), fm = fn(m), fb = fn(b);
    return adapt(fn, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

} // namespace limloc
