#pragma once

#include <functional>
#include <string>
#include <vector>

namespace limloc {

// Closed forms used as Monte Carlo oracles.

// Standard normal CDF via erfc; absolute error below 1e-12.
double normal_cdf(double x);

// P(local time at t stays <= c) = P(|N(0,t)| <= c) = 2 Phi(c/sqrt(t)) - 1.
double prob_E_exact(double t, double c);

// Lower bound via one long excursion: 1 - exp(-allowance * sqrt(2/(pi t))).
double prob_Eprime(double t, double allowance);

// Density of the first hitting time of 0 from x != 0:
// |x| t^{-3/2} exp(-x^2/(2t)) / sqrt(2 pi). The constant is fixed by
// differentiating the reflection CDF P(T <= t) = 2 \int_{|x|/sqrt t}^\infty
// phi(v) dv in t, which yields phi(x/sqrt t) * |x| t^{-3/2}.
double hitting_density(double x, double t);

// CDF of the fraction-of-time laws on [0,1]: (2/pi) asin(sqrt(x)).
double arcsine_cdf(double x);

// Tail of the last-zero law of the negative-part-limited process:
// P(g > A) = 1/(2 sqrt(A)) for A >= 1.
double g_tail(double A);

// Head of the same law: P(g < A) = sqrt(A)/2 for 0 < A <= 1.
double g_head(double A);

// A sampled density curve; normalization holds its numerical integral.
struct DensityGrid {
    std::vector<double> abscissae;
    std::vector<double> values;
    double normalization = 0.0;

    std::string to_csv() const; // header "x,density"
};

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol = 1e-10);

} // namespace limloc
