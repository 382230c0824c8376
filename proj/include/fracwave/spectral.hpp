#ifndef FRACWAVE_SPECTRAL_HPP
#define FRACWAVE_SPECTRAL_HPP

#include "fracwave/fode.hpp"

namespace fracwave {

// Sine-basis pseudo-spectral machinery for the Dirichlet problem on (0, pi)
// and (0, pi)^2. Mode k (or (kx, ky)) carries the eigenvalue k^2 (|k|^2);
// the interior collocation grid has grid_factor * modes points per axis,
// which keeps the retained modes of the pointwise nonlinearity |u|^p clear
// of aliasing for the powers used here.

struct SpectralField {
  std::vector<double> coeffs;  // sine coefficients, one per retained mode
  std::vector<double> phys;    // interior samples, kept in sync
};

class SpectralDomain {
 public:
  SpectralDomain(int dimension, int modes_per_axis, int grid_factor = 4);

  int dimension() const { return dim_; }
  int modes_per_axis() const { return modes_; }
  int num_modes() const { return dim_ == 1 ? modes_ : modes_ * modes_; }
  int grid_per_axis() const { return grid_axis_; }  // interior points per axis
  int num_grid() const { return dim_ == 1 ? grid_axis_ : grid_axis_ * grid_axis_; }

  double eigenvalue(int flat_mode) const;
  double lambda1() const { return dim_ == 1 ? 1.0 : 2.0; }

  std::vector<double> to_phys(const std::vector<double>& coeffs) const;
  std::vector<double> to_coeffs(const std::vector<double>& phys) const;

  SpectralField make_field(std::vector<double> coeffs) const;
  SpectralField field_from_phys(std::vector<double> phys) const;

  // integral of the field against the first eigenfunction, normalized to
  // unit mass (1D: sin(x)/2, 2D: sin(x)sin(y)/4)
  double first_moment(const SpectralField& field) const;
  double first_moment_coeff() const;  // moment of the first basis mode

 private:
  int dim_, modes_, grid_axis_;
  std::vector<double> sin_table_;  // sin(k i pi / M), k modes x i grid
  std::vector<double> eig_;
};

double sup_norm(const SpectralField& f);

// Diagonal solution operators (per-mode multipliers):
//   apply_p:  E_alpha(-lambda_k t^alpha)                  (identity at t = 0)
//   apply_ip: t E_{alpha,2}(-lambda_k t^alpha)            (zero at t = 0)
//   memory:   t^{alpha+gamma-1} E_{alpha,alpha+gamma}(-lambda_k t^alpha)
SpectralField apply_p(const SpectralDomain& dom, double alpha, double t,
                      const SpectralField& f);
SpectralField apply_ip(const SpectralDomain& dom, double alpha, double t,
                       const SpectralField& f);
SpectralField apply_memory_multiplier(const SpectralDomain& dom, double alpha,
                                      double gamma, double t, const SpectralField& f);

// Forcing history for the discrete memory term: coefficients of |u(t_j)|^p
// at every completed node.
struct EvolutionState {
  const SpectralDomain* domain = nullptr;
  std::vector<double> nodes;
  ProblemParams params{};
  std::vector<std::vector<double>> forcing_coeffs;
};

// Collapsed-kernel memory term at node n (per-mode product integration of
// tau^{alpha+gamma-1} E_{alpha,alpha+gamma}(-lambda_k tau^alpha) against the
// stored history); requires forcing history complete through node n.
std::vector<double> memory_kernel_coeffs(const EvolutionState& state, std::size_t n);
SpectralField memory_kernel_apply(const EvolutionState& state, std::size_t n);

struct FieldSolveOutcome {
  MeshPtr mesh;
  std::vector<double> supnorm;               // per node
  std::vector<std::vector<double>> coeffs;   // per node
  std::vector<std::vector<double>> forcing;  // |u|^p coefficients per node
  SolveStatus status = SolveStatus::global_to_horizon;
  std::optional<double> t_star;
  std::vector<RefinementEntry> refinement_history;
};

struct MildSolverOptions {
  double threshold = 0.0;        // 0: 1e6 * max(1, sup|u0|, sup|u1|)
  double halving_trigger = 0.0;  // 0: 1e3 * same scale
  double fp_tol = 1e-10;
  int max_corrector_iters = 50;
  int max_halvings = 24;
  bool nonlinearity = true;  // off: pure linear evolution (decoupled modes)
};

// Mild-solution stepper u(t_n) = P u0 + (0I^1 P) u1 + memory(|u|^p history),
// pseudo-spectral nonlinearity, predictor-corrector in time.
FieldSolveOutcome solve_mild(const SpectralDomain& dom, const SpectralField& u0,
                             const SpectralField& u1, const ProblemParams& params,
                             const MeshPtr& mesh, const MildSolverOptions& opts = {});

// N, 2N, 4N refinement protocol over the sup-norm crossing times, same
// contract as the scalar detect_blowup.
FieldSolveOutcome pde_detect_blowup(const SpectralDomain& dom, const SpectralField& u0,
                                    const SpectralField& u1, const ProblemParams& params,
                                    double horizon, int base_steps,
                                    const MildSolverOptions& opts = {});

struct EigenFunctional {
  SampledPath w;             // first-moment path pi/4 c_1(t)
  SampledPath forcing;       // <0I^gamma(|u|^p), phi_1> path
  double residual = 0.0;     // max over the checked window of the equation residual
  double residual_scale = 0.0;
  double jensen_min_margin = 0.0;  // min of forcing - 0I^gamma(|w|^p)
};

// First-eigenfunction reduction of a finished run: the moment path, the
// residual of 0D^alpha w + lambda_1 w = <0I^gamma(|u|^p), phi1>, and the
// pointwise convexity (Jensen) margin.
EigenFunctional eigenfunctional(const SpectralDomain& dom, const FieldSolveOutcome& run,
                                const ProblemParams& params, double u1_moment);

struct DecayProbe {
  RateFit p_fit;       // expected slope ~ -alpha
  RateFit ip_fit;      // expected slope ~ -(alpha - 1)
  RateFit memory_fit;  // expected slope ~ -(1 - gamma)
};

DecayProbe operator_decay_probe(const SpectralDomain& dom, double alpha, double gamma,
                                const SpectralField& u0, const std::vector<double>& times);

}  // namespace fracwave

#endif
