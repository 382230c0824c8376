#ifndef FRACWAVE_FODE_HPP
#define FRACWAVE_FODE_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "fracwave/fracops.hpp"
#include "fracwave/time_mesh.hpp"

namespace fracwave {

// Scalar model problem: 0D_t^alpha w + a w = b 0I_t^gamma(|w|^p),
// handled through its Volterra form with the kernel
// tau^{alpha+gamma-1} E_{alpha,alpha+gamma}(-a tau^alpha).

struct ProblemParams {
  double alpha;  // time order in (1, 2]
  double gamma;  // memory order > 0
  double p;      // nonlinearity power > 1
  double a;      // linear coefficient > 0
  double b;      // forcing coefficient > 0
  void validate() const;
};

struct ScalarIvp {
  ProblemParams params;
  double w0 = 0.0;
  double w1 = 0.0;
};

enum class SolveStatus { global_to_horizon, blowup };
const char* to_string(SolveStatus s);

struct RefinementEntry {
  int steps;
  double t_cross;
};

struct SolveOutcome {
  SampledPath trajectory;
  SolveStatus status = SolveStatus::global_to_horizon;
  std::optional<double> t_star;
  std::vector<RefinementEntry> refinement_history;
};

class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::size_t node_index, double t);
  std::size_t node;
  double time;
};

class IndeterminateRefinement : public std::runtime_error {
 public:
  explicit IndeterminateRefinement(const std::vector<RefinementEntry>& history);
  std::vector<RefinementEntry> history;
};

class RateUndefined : public std::runtime_error {
 public:
  explicit RateUndefined(const std::string& what) : std::runtime_error(what) {}
};

// Convolution kernel tau^{rho-1} E_{alpha,rho}(-a tau^alpha) with its exact
// antiderivatives (the shift identity raises the second parameter):
//   F(x) = x^rho     E_{alpha,rho+1}(-a x^alpha)
//   G(x) = x^{rho+1} E_{alpha,rho+2}(-a x^alpha)
class MlKernel {
 public:
  MlKernel(double alpha, double rho, double a);
  double F(double x) const;
  double G(double x) const;
  double rho() const { return rho_; }

 private:
  double alpha_, rho_, a_;
};

// Homogeneous part E_alpha(-a t^alpha) w0 + t E_{alpha,2}(-a t^alpha) w1.
double linear_solution(const ScalarIvp& ivp, double t);

// Full linear representation with a known forcing path f (the right-hand
// side of the memory term before |.|^p enters): hom + kernel * f.
SampledPath linear_solution(const ScalarIvp& ivp, const SampledPath& forcing);

struct VolterraOptions {
  double threshold = 0.0;        // 0: use 1e6 * max(1, |w0|, |w1|)
  double halving_trigger = 0.0;  // 0: use 1e3 * max(1, |w0|, |w1|)
  double fp_tol = 1e-10;
  int max_corrector_iters = 50;
  int max_halvings = 40;
};

// Predictor-corrector product-integration stepper; flags blow-up when |w|
// crosses the threshold, locally halving steps once |w| passes the trigger.
SolveOutcome solve_volterra(const ScalarIvp& ivp, const MeshPtr& mesh,
                            const VolterraOptions& opts = {});

// Runs solve_volterra on meshes of N, 2N, 4N steps; declares blow-up only if
// the crossing times agree within 5% between consecutive refinements (the
// reported t* is the Aitken extrapolation), global-to-horizon if all three
// runs reach the horizon, and throws IndeterminateRefinement otherwise.
SolveOutcome detect_blowup(const ScalarIvp& ivp, double horizon, int base_steps = 256,
                           const VolterraOptions& opts = {});

struct RateFit {
  double slope = 0.0;
  double half_width = 0.0;  // ~95% confidence half width of the slope
  int points = 0;
};

// Least-squares slope of log|y| against log t over [t_lo, t_hi].
RateFit fit_log_slope(const SampledPath& y, double t_lo, double t_hi);
RateFit fit_log_slope(const std::vector<double>& ts, const std::vector<double>& ys,
                      double t_lo, double t_hi);

// beta = 0 fits the trajectory itself, beta > 0 fits 0I_t^beta w.
RateFit estimate_rate(const SolveOutcome& outcome, double beta, double t_lo, double t_hi);

struct AprioriCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Weighted a-priori inequality over [0, T] (T = testfn horizon):
//   norm * [ int |w|^p psi_T + w0 T^{1-a-g} + w1 T^{2-a-g} ]
//     <= K1 T^{1-pg/(p-1)} + K2 T^{1-p(a+g)/(p-1)}   (5% slack)
// K1, K2, norm come from the calibration of the constants.
AprioriCheck apriori_check(const SolveOutcome& outcome, const PowerTestFunction& testfn,
                           double K1, double K2, double norm, const ScalarIvp& ivp);

}  // namespace fracwave

#endif
