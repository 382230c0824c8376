#include "fracwave/special.hpp"

#include <cmath>
#include <limits>

namespace fracwave {

double rgamma(double x) {
  if (x > 0.0) {
    if (x > 170.0) return 0.0;  // Gamma overflows double; reciprocal underflows
    return std::exp(-std::lgamma(x));
  }
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-13 && r <= 0.0) return 0.0;  // pole of Gamma
  // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  const double s = std::sin(M_PI * x);
  const double lg = std::lgamma(1.0 - x);
  if (lg > 700.0) {
    // Gamma(1-x) overflows; 1/Gamma(x) is huge. Saturate with correct sign.
    return std::copysign(std::numeric_limits<double>::infinity(), s);
  }
  return s * std::exp(lg) / M_PI;
}

double gamma_ratio(double a, double b) {
  return std::exp(std::lgamma(a) - std::lgamma(b));
}

}  // namespace fracwave
