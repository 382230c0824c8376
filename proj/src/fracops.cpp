#include "fracwave/fracops.hpp"

#include <cmath>
#include <stdexcept>

#include "fracwave/special.hpp"

namespace fracwave {

PowerKernel::PowerKernel(double mu) : mu_(mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("integral order must be positive");
  cF_ = rgamma(mu + 1.0);
  cG_ = rgamma(mu + 2.0);
}

double PowerKernel::F(double x) const { return cF_ * std::pow(x, mu_); }
double PowerKernel::G(double x) const { return cG_ * std::pow(x, mu_ + 1.0); }

namespace {

// Shared convolution loop: out[i] = sum over cells [t_j, t_{j+1}] of the
// product-integration moments against the piecewise-linear density. The lag
// tables are precomputed on uniform meshes (lag = (i-j) h).
template <typename KF, typename KG>
std::vector<double> convolve_left(const SampledPath& f, KF&& F, KG&& G) {
  const auto& t = f.mesh->nodes();
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);

  if (f.mesh->is_uniform()) {
    const double h = t[1] - t[0];
    std::vector<double> Ft(n), Gt(n);
    Ft[0] = 0.0;
    Gt[0] = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
      Ft[m] = F(m * h);
      Gt[m] = G(m * h);
    }
    for (std::size_t i = 1; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const std::size_t mc = i - j, ma = i - j - 1;
        const double dG = Gt[mc] - Gt[ma];
        acc += f.values[j] * (h * Ft[mc] - dG) + f.values[j + 1] * (dG - h * Ft[ma]);
      }
      out[i] = acc / h;
    }
    return out;
  }

  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    double Fc = F(t[i] - t[0]);
    double Gc = G(t[i] - t[0]);
    for (std::size_t j = 0; j < i; ++j) {
      const double a = t[i] - t[j + 1];
      const double h = t[j + 1] - t[j];
      const double Fa = (a == 0.0) ? 0.0 : F(a);
      const double Ga = (a == 0.0) ? 0.0 : G(a);
      const double dG = Gc - Ga;
      acc += (f.values[j] * (h * Fc - dG) + f.values[j + 1] * (dG - h * Fa)) / h;
      Fc = Fa;
      Gc = Ga;
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> second_difference(const SampledPath& f, double c0, double c1) {
  const auto& t = f.mesh->nodes();
  const std::size_t n = t.size();
  if (n < 3) throw std::invalid_argument("second difference needs at least 3 nodes");
  std::vector<double> v(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f.values[i] - c0 - c1 * t[i];
  auto stencil = [&](std::size_t i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    return 2.0 * ((v[i + 1] - v[i]) / h2 - (v[i] - v[i - 1]) / h1) / (h1 + h2);
  };
  for (std::size_t i = 1; i + 1 < n; ++i) d2[i] = stencil(i);
  d2[0] = stencil(1);          // one-sided: quadratic through the first 3 nodes
  d2[n - 1] = stencil(n - 2);  // and the last 3
  return d2;
}

}  // namespace

SampledPath frac_integral_left(const SampledPath& f, double order) {
  PowerKernel k(order);
  return {f.mesh, convolve_left(f, [&](double x) { return k.F(x); },
                                [&](double x) { return k.G(x); })};
}

SampledPath frac_integral_right(const SampledPath& f, double order) {
  // mirror in time and reuse the left-sided loop
  const auto& t = f.mesh->nodes();
  const std::size_t n = t.size();
  const double T = f.mesh->horizon();
  std::vector<double> rnodes(n), rvals(n);
  for (std::size_t i = 0; i < n; ++i) {
    rnodes[i] = T - t[n - 1 - i];
    rvals[i] = f.values[n - 1 - i];
  }
  rnodes[0] = 0.0;
  SampledPath mirrored{TimeMesh::from_nodes(std::move(rnodes)), std::move(rvals)};
  SampledPath res = frac_integral_left(mirrored, order);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = res.values[n - 1 - i];
  return {f.mesh, std::move(out)};
}

SampledPath caputo_left(const SampledPath& f, double alpha, double w0, double w1) {
  if (!(alpha > 1.0) || alpha > 2.0)
    throw std::invalid_argument("caputo order must lie in (1, 2]");
  auto d2 = second_difference(f, w0, w1);
  if (alpha == 2.0) return {f.mesh, std::move(d2)};
  return frac_integral_left({f.mesh, std::move(d2)}, 2.0 - alpha);
}

SampledPath caputo_right(const SampledPath& g, double alpha) {
  if (!(alpha > 1.0) || alpha > 2.0)
    throw std::invalid_argument("caputo order must lie in (1, 2]");
  const auto& t = g.mesh->nodes();
  const std::size_t n = t.size();
  if (n < 3) throw std::invalid_argument("need at least 3 nodes");
  double gmax = 0.0;
  for (double v : g.values) gmax = std::max(gmax, std::abs(v));
  const double tail = std::abs(g.values[n - 1]);
  // second-order one-sided derivative at T; its discretization error is
  // O(h^2), so the threshold carries an h^2 term on top of the 1e-8 floor
  const double h = t[n - 1] - t[n - 2];
  const double dtail = std::abs(
      (3.0 * g.values[n - 1] - 4.0 * g.values[n - 2] + g.values[n - 3]) / (2.0 * h));
  const double T = g.mesh->horizon();
  const double dtol = gmax * (1e-8 + 10.0 * (h / T) * (h / T));
  if (tail > 1e-8 * gmax || dtail > dtol)
    throw std::invalid_argument("right caputo requires g(T) = g'(T) = 0");
  auto d2 = second_difference(g, 0.0, 0.0);
  if (alpha == 2.0) return {g.mesh, std::move(d2)};
  return frac_integral_right({g.mesh, std::move(d2)}, 2.0 - alpha);
}

double trapezoid(const SampledPath& f) {
  const auto& t = f.mesh->nodes();
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    s += 0.5 * (t[i] - t[i - 1]) * (f.values[i] + f.values[i - 1]);
  return s;
}

double trapezoid_product(const SampledPath& f, const SampledPath& g) {
  if (f.size() != g.size()) throw std::invalid_argument("path size mismatch");
  const auto& t = f.mesh->nodes();
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    s += 0.5 * (t[i] - t[i - 1]) *
         (f.values[i] * g.values[i] + f.values[i - 1] * g.values[i - 1]);
  return s;
}

PowerTestFunction::PowerTestFunction(double l_, double horizon_, double gamma_order_,
                                     double alpha_order_)
    : l(l_), horizon(horizon_), gamma_order(gamma_order_), alpha_order(alpha_order_) {
  if (!(l >= 2.0)) throw std::invalid_argument("test exponent l must be >= 2");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(gamma_order > 0.0)) throw std::invalid_argument("gamma order must be positive");
  if (!(alpha_order > 1.0) || alpha_order > 2.0)
    throw std::invalid_argument("alpha order must lie in (1, 2]");
  if (!(l + 1.0 - alpha_order - gamma_order > 0.0))
    throw std::invalid_argument("l too small for the requested orders");
}

double PowerTestFunction::psi(double t) const {
  if (t < 0.0 || t > horizon) throw std::invalid_argument("t outside [0, T]");
  return std::pow(1.0 - t / horizon, l);
}

double PowerTestFunction::right_deriv(double order, double t) const {
  if (t < 0.0 || t > horizon) throw std::invalid_argument("t outside [0, T]");
  if (order == 0.0) return psi(t);
  if (!(l + 1.0 - order > 0.0)) throw std::invalid_argument("order too large for l");
  return gamma_ratio(l + 1.0, l + 1.0 - order) * std::pow(horizon, -l) *
         std::pow(horizon - t, l - order);
}

double PowerTestFunction::right_integral(double order, double t) const {
  if (t < 0.0 || t > horizon) throw std::invalid_argument("t outside [0, T]");
  return gamma_ratio(l + 1.0, l + 1.0 + order) * std::pow(horizon, -l) *
         std::pow(horizon - t, l + order);
}

TestFunctionValues test_fn_derivatives(const PowerTestFunction& spec, double t) {
  return {spec.psi(t), spec.right_deriv(spec.gamma_order, t),
          spec.right_deriv(spec.alpha_order + spec.gamma_order, t)};
}

double ibp_residual(const SampledPath& f, const SampledPath& g, double alpha,
                    double f0, double f1) {
  if (f.size() != g.size()) throw std::invalid_argument("path size mismatch");
  if (!(alpha > 1.0) || alpha > 2.0)
    throw std::invalid_argument("caputo order must lie in (1, 2]");
  SampledPath dg = caputo_right(g, alpha);  // validates the boundary conditions

  // Left side int (0D^a f) g dt evaluated through the dual pairing
  // int (d2 of f - jet) (tI_T^{2-a} g) dt: the direct integrand behaves like
  // t^{2-a} near 0 and plain trapezoid loses an order there.
  SampledPath d2f{f.mesh, second_difference(f, f0, f1)};
  double lhs;
  if (alpha == 2.0) {
    lhs = trapezoid_product(d2f, g);
  } else {
    lhs = trapezoid_product(d2f, frac_integral_right(g, 2.0 - alpha));
  }

  SampledPath shifted = f;
  for (std::size_t i = 0; i < f.size(); ++i)
    shifted.values[i] -= f0 + f1 * f.mesh->node(i);
  const double rhs = trapezoid_product(shifted, dg);
  return std::abs(lhs - rhs);
}

}  // namespace fracwave
