#ifndef FRACWAVE_BLOWUP_LAB_HPP
#define FRACWAVE_BLOWUP_LAB_HPP

#include <map>
#include <string>

#include "fracwave/spectral.hpp"

namespace fracwave {

// Regime classification per the sharp blow-up / global-existence cases, the
// explicit test-function constants behind the a-priori inequality, and the
// batch machinery that cross-checks predictions against simulations.

enum class Verdict { blowup, global_small_data, outside_theorems };
const char* to_string(Verdict v);

struct HypothesisRecord {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  bool holds = false;
};

struct RegimePrediction {
  Verdict verdict = Verdict::outside_theorems;
  std::string theorem_case;  // citation tag, e.g. "Thm3.7(a)", "Thm3.11(ii)"
  std::vector<HypothesisRecord> hypotheses;
};

struct MomentData {
  double m0 = 0.0;  // first-eigenfunction moment of u0 (phi1 has unit mass)
  double m1 = 0.0;  // same for u1
  bool u1_identically_zero = false;  // structural, not a numerical accident
};

// Decision tree over the theorem cases; alpha_is_2 must match params.alpha.
// Blow-up cases are checked first (boundaries p(1-gamma) = 1 inclusive),
// global-small-data after, anything else is outside-theorems ("never guess").
RegimePrediction classify_regime(const ProblemParams& params, const MomentData& moments,
                                 bool alpha_is_2);

// Scalar-model flavor of the citation tags ("Thm3.7(a)" -> "Cor2.5(vi)(a)",
// "Thm3.8" -> "Cor2.6(iv)").
std::string scalar_case_tag(const std::string& pde_tag);

struct CriterionConstants {
  double K1 = 0.0;
  double K2 = 0.0;
  double l = 0.0;
  // the rigorous inequality carries min(b/2, Gamma-ratio coefficients) on
  // its left side; checks apply it so that K1, K2 stay pure Young/Beta
  // products with the exact b^{-1/(p-1)} scaling
  double normalizer = 0.0;
  std::map<std::string, double> trace;
};

// Explicit constants from the Young-split of the test-function estimate with
// psi_T = (1 - t/T)^l. l <= 0 selects ceil(p(alpha+gamma)/(p-1)) + 1.
CriterionConstants calibrate_constants(const ProblemParams& params, double l = 0.0);

// Sufficient blow-up criterion at horizon T:
//   normalizer * (T m1 + m0) > K1 T^{alpha+gamma-p gamma/(p-1)}
//                            + K2 T^{-(alpha+gamma)/(p-1)}
// true implies the solution cannot persist to T (T* < T).
bool remark_criterion(double T, const MomentData& moments,
                      const CriterionConstants& constants, const ProblemParams& params);

struct CaseConfig {
  enum class Solver { scalar, pde };
  Solver solver = Solver::scalar;
  ProblemParams params{1.5, 0.6, 2.0, 1.0, 1.0};
  // scalar initial data
  double w0 = 0.0;
  double w1 = 0.0;
  // pde initial data: (flat mode index, amplitude), 1D by default
  int dimension = 1;
  int modes = 64;
  std::vector<std::pair<int, double>> u0_modes, u1_modes;
  double horizon = 50.0;
  int base_steps = 256;
  // smallness search for global predictions: scale halved until decay to
  // horizon is observed
  int max_bisections = 12;
  // optional rate fit on global outcomes (scalar solver)
  bool fit_rate = false;
  double rate_beta = 0.0;
  double rate_window_lo = 0.0, rate_window_hi = 0.0;
};

struct RegimeReport {
  ProblemParams params{};
  MomentData moments;
  RegimePrediction prediction;
  CriterionConstants constants;
  std::string observed;  // "blowup" | "global-to-horizon" | "unconfirmed"
  std::optional<double> t_star;
  std::optional<double> verified_scale;
  std::vector<RateFit> rate_fits;
  bool agreement = false;
};

RegimeReport run_case(const CaseConfig& config);

struct SweepGrid {
  CaseConfig::Solver solver = CaseConfig::Solver::scalar;
  std::vector<double> alphas, gammas, ps, scales;
  double a = 1.0, b = 1.0;
  double w1 = 0.0;  // scalar initial slope (scalar solver only)
  double horizon = 60.0;
  int base_steps = 160;
  int threads = 2;
  // field-solver cells run on ground-mode data of the given scale
  int modes = 32;
  int dimension = 1;
};

struct PhaseRow {
  double alpha = 0.0, gamma = 0.0, p = 0.0, scale = 0.0;
  std::string prediction, theorem_case, observed;
  std::optional<double> t_star;
  std::string error;  // per-cell failure note, empty on success
};

// Cartesian sweep over (alpha, gamma, p) x scales; cells run concurrently
// and are merged in grid order; per-cell failures are recorded, never fatal.
std::vector<PhaseRow> sweep(const SweepGrid& grid);

}  // namespace fracwave

#endif
