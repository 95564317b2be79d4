#include "subinfo/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "subinfo/errors.hpp"

namespace subinfo {

namespace {
constexpr double kShift = 10.0;

void require_positive(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                          std::to_string(x));
}
}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    // lnG(x) = lnG(x+n) - ln(x (x+1) ... (x+n-1)); the product is accumulated
    // in a scaled form so tiny x does not underflow.
    double shift = 0.0;
    double prod = 1.0;
    while (x < kShift) {
        prod *= x;
        x += 1.0;
        if (prod < 1e-280 || prod > 1e280) {
            shift += std::log(prod);
            prod = 1.0;
        }
    }
    shift += std::log(prod);

    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_{2k} / (2k (2k-1) x^(2k-1)), k = 1..7
    const double series =
        inv * (1.0 / 12.0 +
               inv2 * (-1.0 / 360.0 +
                       inv2 * (1.0 / 1260.0 +
                               inv2 * (-1.0 / 1680.0 +
                                       inv2 * (1.0 / 1188.0 +
                                               inv2 * (-691.0 / 360360.0 +
                                                       inv2 * (1.0 / 156.0)))))));
    const double stirling =
        (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
    return stirling - shift;
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    double acc = 0.0;
    while (x < kShift) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // 1/x + 1/(2x^2) + sum_k B_{2k} / x^(2k+1)
    const double series =
        inv * (1.0 +
               inv * 0.5 +
               inv2 * (1.0 / 6.0 +
                       inv2 * (-1.0 / 30.0 +
                               inv2 * (1.0 / 42.0 +
                                       inv2 * (-1.0 / 30.0 +
                                               inv2 * (5.0 / 66.0 +
                                                       inv2 * (-691.0 / 2730.0 +
                                                               inv2 * (7.0 / 6.0))))))));
    return acc + series;
}

}  // namespace subinfo
