#pragma once

namespace apelt {

/// psi(x) for x > 0: recurrence shift to x >= 10, then the asymptotic series.
double digamma(double x);

/// psi'(x) for x > 0, same scheme as digamma.
double trigamma(double x);

/// log B(a, b) via lgamma.
double log_beta(double a, double b);

}  // namespace apelt
