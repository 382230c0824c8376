// Test-only brute-force Mittag-Leffler series oracle in __float128
// (~34 significant digits), independent of the production evaluation paths.
// The `condition` output reports max|term| / |sum|; results are trustworthy
// while condition stays a few orders below 1e15.
#ifndef FRACWAVE_TESTS_MLQ_ORACLE_HPP
#define FRACWAVE_TESTS_MLQ_ORACLE_HPP

#include <quadmath.h>

#include <cmath>

namespace mlq {

struct OracleValue {
  double value;
  double condition;
};

inline OracleValue ml_series(double alpha, double beta, double x) {
  __float128 sum = 0, max_abs = 0;
  const __float128 lx = (x == 0.0) ? 0.0Q : logq(fabsq((__float128)x));
  const double L = std::pow(std::fabs(x), 1.0 / alpha);
  const double peak = (std::fabs(x) > 1.0) ? (L - beta) / alpha + 2.0 : 2.0;
  for (int k = 0; k <= 8000; ++k) {
    __float128 t;
    if (x == 0.0) {
      if (k > 0) break;
      t = expq(-lgammaq((__float128)beta));
    } else {
      const __float128 lt =
          (__float128)k * lx - lgammaq((__float128)alpha * k + (__float128)beta);
      t = expq(lt);
      if (x < 0.0 && (k & 1)) t = -t;
    }
    sum += t;
    if (fabsq(t) > max_abs) max_abs = fabsq(t);
    if (k > peak && fabsq(t) < fabsq(sum) * 1e-36Q + (__float128)1e-320) break;
  }
  return {(double)sum, (double)(max_abs / (fabsq(sum) + (__float128)1e-300))};
}

inline double ml(double alpha, double beta, double x) {
  return ml_series(alpha, beta, x).value;
}

}  // namespace mlq

#endif
