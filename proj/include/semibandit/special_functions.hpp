#pragma once

namespace semibandit {

// ln B(a, b).
double log_beta(double a, double b);

// I_x(a, b), the Beta(a, b) CDF at x. Lentz continued fraction on the side
// where it converges fast, with I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
double regularized_incomplete_beta(double a, double b, double x);

// Bernoulli KL divergence D(M | x), with 0 ln 0 = 0 at the boundary.
double kl_bernoulli(double mean, double x);

// P(U_1 + ... + U_m <= x) for i.i.d. uniforms.
double irwin_hall_cdf(int m, double x);

}  // namespace semibandit
