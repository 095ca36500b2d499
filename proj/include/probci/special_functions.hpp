// Special functions needed by the interval methods. All routines are
// self-contained (no dependency on Boost or the C++ special math library) so
// the test oracle can stay independent.
#pragma once

namespace probci {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF. Wichura's AS241 rational approximation
/// refined by one Newton step against erfc; absolute error well below 1e-9.
/// Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Two-sided critical value C_a = Quant(1 - (1 - confidence)/2).
double critical_value(double confidence);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

/// Inverse of I_x(a, b) in x. Safeguarded Newton iteration on a shrinking
/// bracket; converges to 1e-10 in CDF space or to machine resolution in x.
/// Lower-tail probabilities above 0.5 are solved through the reflected
/// distribution for accuracy near 1.
double beta_inv_cdf(double q, double a, double b);

/// Upper-tail inverse: x with 1 - I_x(a, b) = q, computed without forming
/// 1 - q.
double beta_inv_ccdf(double q, double a, double b);

}  // namespace probci
