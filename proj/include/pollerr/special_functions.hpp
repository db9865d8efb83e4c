#pragma once

namespace pollerr {

// Standard normal CDF.
double normal_cdf(double z);

// Inverse standard normal CDF. Rational approximation refined by one Newton
// step; absolute error well below 1e-8 over (0, 1).
double normal_quantile(double p);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation, absolute accuracy ~1e-14 for moderate a, b.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with df degrees of freedom,
// computed as I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

// Upper-tail one-sided p-value Pr[T > t].
double student_t_upper_p(double t, double df);

}  // namespace pollerr
