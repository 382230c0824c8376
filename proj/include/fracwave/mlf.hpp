#ifndef FRACWAVE_MLF_HPP
#define FRACWAVE_MLF_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

namespace fracwave {

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z), the workhorse
// kernel of every solver in this library. Supported order range is
// 0 < alpha <= 2 with real beta; arguments may be complex, but the main
// production use is the negative real axis.
//
// Evaluation strategy:
//   * power series (compensated summation, log-space terms) while the
//     cancellation estimate allows it; escalates to extended-precision
//     accumulation when a tight tolerance demands it;
//   * for large |z| in the sector |arg z| > pi*alpha/2, the inverse-power
//     expansion with its exponentially small residue corrections. For
//     alpha = 2 on the negative axis the residue pair is the familiar
//     oscillatory cosine term; for alpha < 2 it decays like
//     exp(-|z|^{1/alpha} |cos(pi/alpha)|) and is kept because it dominates
//     the truncation error at moderate |z|.
// Every value carries an absolute error estimate (truncation plus a
// rounding/cancellation bound).

enum class MlBranch { series, asymptotic, asymptotic_alpha2 };

const char* to_string(MlBranch b);

struct MlValue {
  std::complex<double> value{0.0, 0.0};
  MlBranch branch = MlBranch::series;
  double est_error = 0.0;  // absolute estimate

  // Projection for real-argument use; throws if a real argument leaked a
  // non-negligible imaginary part.
  double real_checked() const;
};

class MlOverflowError : public std::runtime_error {
 public:
  explicit MlOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// General entry point. tol is a relative target; est_error reports what was
// actually achieved (absolute). Throws std::invalid_argument outside
// 0 < alpha <= 2 or tol <= 0, MlOverflowError when exp(z^{1/alpha})
// overflows double range.
MlValue ml_eval(double alpha, double beta, std::complex<double> z, double tol = 1e-12);

// Convenience for real arguments.
double ml_eval_real(double alpha, double beta, double x, double tol = 1e-12);

// Forced branches (used by the branch-consistency tests and internally).
MlValue ml_series(double alpha, double beta, std::complex<double> z, double tol,
                  int max_terms = 3000);
MlValue ml_series_ext(double alpha, double beta, std::complex<double> z, double tol,
                      int max_terms = 3000);  // long-double accumulation
// n_terms < 0 selects truncation at the smallest inverse-power term.
MlValue ml_asymptotic(double alpha, double beta, std::complex<double> z, int n_terms = -1);

// The N-term large-argument expansion with the residue (oscillatory) part,
// est_error = magnitude of the first omitted inverse-power term.
// Preconditions: z != 0; for alpha < 2 require |arg z| >= pi*alpha/2; for
// alpha = 2 require z on the negative real axis.
MlValue ml_asymptotic_tail(double alpha, double beta, std::complex<double> z, int n_terms);

struct PositivityScan {
  bool all_positive = true;
  double first_violation_x = 0.0;  // meaningful when !all_positive
  double value_at_violation = 0.0;
};

// Checks E_{alpha,rho}(-x) > 0 over the given x >= 0 grid. 1 < alpha <= 2.
PositivityScan positivity_scan(double alpha, double rho, std::span<const double> xs);

}  // namespace fracwave

#endif
