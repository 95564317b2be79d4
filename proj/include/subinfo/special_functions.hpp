#pragma once

namespace subinfo {

// ln Gamma(x) for x > 0; recurrence shift to x >= 10 then Stirling series.
double log_gamma(double x);

// psi'(x) for x > 0; recurrence shift to x >= 10 then asymptotic series.
double trigamma(double x);

}  // namespace subinfo
