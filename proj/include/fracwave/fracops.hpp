#ifndef FRACWAVE_FRACOPS_HPP
#define FRACWAVE_FRACOPS_HPP

#include "fracwave/time_mesh.hpp"

namespace fracwave {

// Product-integration scheme for convolutions with a weakly singular kernel
// k(tau), given its antiderivatives F(x) = int_0^x k and G(x) = int_0^x F.
// On a cell [a, c] of the lag variable the piecewise-linear density is
// integrated exactly:
//   int_a^c (tau - a) k(tau) dtau = (c - a) F(c) - (G(c) - G(a))
//   int_a^c (c - tau) k(tau) dtau = (G(c) - G(a)) - (c - a) F(a)
// Every convolution in this library (power kernels here, the
// exponential-kernel variants in the solvers) goes through these two moments.

// k(tau) = tau^{mu-1} / Gamma(mu), the Riemann-Liouville kernel.
class PowerKernel {
 public:
  explicit PowerKernel(double mu);
  double order() const { return mu_; }
  double F(double x) const;
  double G(double x) const;

 private:
  double mu_, cF_, cG_;
};

// Left Riemann-Liouville integral (0I_t^order f); value at t_0 is 0.
SampledPath frac_integral_left(const SampledPath& f, double order);

// Right integral (tI_T^order f); value at t_N is 0.
SampledPath frac_integral_right(const SampledPath& f, double order);

// Caputo derivative of order alpha in (1, 2]: the (2-alpha)-integral of the
// second difference of f - w0 - w1 t (one-sided differences at the ends);
// alpha = 2 returns the plain second difference.
SampledPath caputo_left(const SampledPath& f, double alpha, double w0, double w1);

// Right-sided counterpart; requires g(T) = g'(T) = 0 within
// 1e-8 * max|g| (throws std::invalid_argument otherwise).
SampledPath caputo_right(const SampledPath& g, double alpha);

double trapezoid(const SampledPath& f);
double trapezoid_product(const SampledPath& f, const SampledPath& g);

// psi_T(t) = (1 - t/T)^l with its right-sided fractional calculus in closed
// form. l must keep psi and psi' zero at T (l >= 2).
struct PowerTestFunction {
  double l;
  double horizon;
  double gamma_order;
  double alpha_order;

  PowerTestFunction(double l, double horizon, double gamma_order, double alpha_order);

  double psi(double t) const;
  // tD_T^order psi = Gamma(l+1)/Gamma(l+1-order) T^{-l} (T-t)^{l-order}
  double right_deriv(double order, double t) const;
  // tI_T^order psi = Gamma(l+1)/Gamma(l+1+order) T^{-l} (T-t)^{l+order}
  double right_integral(double order, double t) const;
};

struct TestFunctionValues {
  double psi;
  double d_gamma;        // tD_T^gamma psi
  double d_alpha_gamma;  // tD_T^{alpha+gamma} psi
};

TestFunctionValues test_fn_derivatives(const PowerTestFunction& spec, double t);

// | int_0^T (0D_t^alpha f) g dt - int_0^T (f - f1 t - f0) (tD_T^alpha g) dt |
// with both sides from the module's discrete operators. g must satisfy the
// caputo_right boundary conditions.
double ibp_residual(const SampledPath& f, const SampledPath& g, double alpha,
                    double f0, double f1);

}  // namespace fracwave

#endif
