#ifndef FRACWAVE_SPECIAL_HPP
#define FRACWAVE_SPECIAL_HPP

namespace fracwave {

// 1/Gamma(x) on the real line. Returns exactly 0 at the poles of Gamma
// (non-positive integers); uses the reflection formula for x < 0.
double rgamma(double x);

// Gamma(a)/Gamma(b) for a, b > 0, evaluated in log space.
double gamma_ratio(double a, double b);

}  // namespace fracwave

#endif
