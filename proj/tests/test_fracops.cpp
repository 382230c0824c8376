#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <array>
#include <random>

#include "fracwave/fracops.hpp"
#include "fracwave/mlf.hpp"
#include "fracwave/special.hpp"
#include "support/quad.hpp"

using namespace fracwave;

namespace {

double max_abs_diff(const SampledPath& a, const SampledPath& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("mesh construction") {
  auto u = TimeMesh::uniform(2.0, 8);
  CHECK(u->is_uniform());
  CHECK(u->node(0) == 0.0);
  CHECK(u->horizon() == 2.0);
  // grading r = 1 reproduces the uniform mesh exactly
  auto g1 = TimeMesh::graded(2.0, 8, 1.0);
  for (std::size_t i = 0; i < u->size(); ++i) CHECK(g1->node(i) == u->node(i));
  auto g2 = TimeMesh::graded(1.0, 8, 2.0);
  CHECK_FALSE(g2->is_uniform());
  CHECK(g2->node(1) == doctest::Approx(1.0 / 64.0));
  CHECK_THROWS_AS(TimeMesh::from_nodes({0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimeMesh::from_nodes({0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("power rule for the left integral") {
  auto mesh = TimeMesh::uniform(1.0, 2048);
  for (double mu : {0.0, 1.0, 2.5}) {
    for (double order : {0.5, 0.8, 1.3}) {
      auto f = sample(mesh, [&](double t) { return std::pow(t, mu); });
      auto If = frac_integral_left(f, order);
      const double c = gamma_ratio(mu + 1.0, mu + 1.0 + order);
      for (std::size_t i = mesh->size() / 4; i < mesh->size(); i += 97) {
        const double t = mesh->node(i);
        const double ref = c * std::pow(t, mu + order);
        INFO("mu=", mu, " order=", order, " t=", t);
        // the start-up cell of t^{2.5} leaves an absolute h^{2.5} floor
        CHECK(std::abs(If.values[i] - ref) <= 1e-6 * std::abs(ref) + 3e-8);
        if (t >= 0.5) CHECK(std::abs(If.values[i] - ref) <= 1e-6 * std::abs(ref));
      }
    }
  }
}

TEST_CASE("constant and zero inputs") {
  auto mesh = TimeMesh::uniform(1.0, 512);
  auto one = sample(mesh, [](double) { return 1.0; });
  auto I = frac_integral_left(one, 0.5);
  // t^{1/2} / Gamma(3/2) at t = 1
  CHECK(I.values.back() == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-10));
  auto zero = sample(mesh, [](double) { return 0.0; });
  auto Iz = frac_integral_left(zero, 0.7);
  for (double v : Iz.values) CHECK(v == 0.0);
  CHECK(I.values.front() == 0.0);
  CHECK_THROWS_AS(frac_integral_left(one, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(frac_integral_left(one, -1.0), std::invalid_argument);
}

TEST_CASE("kernel-shift identity against the special function") {
  // 0I_t^g [t^{b-1} E_{a,b}(l t^a)] = t^{b+g-1} E_{a,b+g}(l t^a)
  const double alpha = 1.5, lambda = -1.0, g = 0.7;
  auto mesh = TimeMesh::graded(2.0, 2048, 2.0);
  for (double beta : {1.0, 2.0}) {
    auto f = sample(mesh, [&](double t) {
      return (beta == 1.0 ? 1.0 : std::pow(t, beta - 1.0)) *
             ml_eval_real(alpha, beta, lambda * std::pow(t, alpha));
    });
    auto If = frac_integral_left(f, g);
    for (std::size_t i = mesh->size() / 2; i < mesh->size(); i += 111) {
      const double t = mesh->node(i);
      const double ref =
          std::pow(t, beta + g - 1.0) * ml_eval_real(alpha, beta + g, lambda * std::pow(t, alpha));
      INFO("beta=", beta, " t=", t);
      CHECK(std::abs(If.values[i] - ref) <= 2e-5 * (std::abs(ref) + 0.1));
    }
  }
}

TEST_CASE("right integral basics") {
  auto mesh = TimeMesh::uniform(2.0, 2048);
  // g == 1, order 1, at t = 0 gives T
  auto one = sample(mesh, [](double) { return 1.0; });
  auto I1 = frac_integral_right(one, 1.0);
  CHECK(I1.values.front() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(I1.values.back() == 0.0);

  // closed form for (1 - t/T)^l
  const double l = 4.0, g = 0.6, T = 2.0;
  auto f = sample(mesh, [&](double t) { return std::pow(1.0 - t / T, l); });
  auto If = frac_integral_right(f, g);
  const double c = gamma_ratio(l + 1.0, l + 1.0 + g) * std::pow(T, -l);
  for (std::size_t i = 0; i + mesh->size() / 8 < mesh->size(); i += 61) {
    const double ref = c * std::pow(T - mesh->node(i), l + g);
    // h^2 curvature error leaves a small absolute floor
    CHECK(std::abs(If.values[i] - ref) <= 1e-6 * std::abs(ref) + 5e-8);
  }
}

namespace {

// Duality residual for cubic polynomials. The constant modes f(0), g(T)
// produce t^order / (T-t)^order factors whose endpoint cells defeat plain
// trapezoid sampling, so their (exactly known) contributions are integrated
// in closed form and the sampled part carries the genuinely discrete check.
double duality_residual(const std::array<double, 4>& fc, const std::array<double, 4>& gc,
                        const MeshPtr& mesh, double order) {
  const double T = mesh->horizon();
  auto feval = [&](double t) { return fc[0] + t * (fc[1] + t * (fc[2] + t * fc[3])); };
  auto geval = [&](double t) { return gc[0] + t * (gc[1] + t * (gc[2] + t * gc[3])); };
  const double f0 = fc[0];
  const double gT = geval(T);

  auto f_shift = sample(mesh, [&](double t) { return feval(t) - f0; });
  auto g_path = sample(mesh, geval);
  double lhs = trapezoid_product(frac_integral_left(f_shift, order), g_path);
  // f0 * int_0^T t^order/Gamma(order+1) g(t) dt, exact power moments
  for (int j = 0; j < 4; ++j)
    lhs += f0 * rgamma(order + 1.0) * gc[j] * std::pow(T, order + j + 1.0) /
           (order + j + 1.0);

  auto g_shift = sample(mesh, [&](double t) { return geval(t) - gT; });
  auto f_path = sample(mesh, feval);
  double rhs = trapezoid_product(f_path, frac_integral_right(g_shift, order));
  // gT * int_0^T f(t) (T-t)^order/Gamma(order+1) dt via Beta moments
  for (int j = 0; j < 4; ++j)
    rhs += gT * fc[j] * std::pow(T, order + j + 1.0) * std::tgamma(double(j + 1)) *
           rgamma(order + j + 2.0);
  return std::abs(lhs - rhs);
}

}  // namespace

TEST_CASE("duality of left and right integrals") {
  std::mt19937 rng(7121);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  auto mesh = TimeMesh::uniform(1.0, 2048);
  for (double order : {0.5, 1.5}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::array<double, 4> fc{uc(rng), uc(rng), uc(rng), uc(rng)};
      std::array<double, 4> gc{uc(rng), uc(rng), uc(rng), uc(rng)};
      INFO("order=", order, " rep=", rep);
      CHECK(duality_residual(fc, gc, mesh, order) <= 1e-6);
    }
  }
}

TEST_CASE("semigroup property with measured refinement order") {
  // f(0) = 0 keeps the inner result clear of the t^b start-up mode, whose
  // exact handling the power-rule test already covers
  const double a = 0.6, b = 0.9;
  std::vector<double> errs;
  for (int n : {512, 1024, 2048}) {
    auto mesh = TimeMesh::uniform(1.0, n);
    auto f = sample(mesh, [](double t) { return t - 0.5 * t * t + t * t * t; });
    auto lhs = frac_integral_left(frac_integral_left(f, a), b);
    auto rhs = frac_integral_left(f, a + b);
    errs.push_back(max_abs_diff(lhs, rhs));
  }
  CHECK(errs[2] < 1e-6);
  const double rate = std::log2(errs[0] / errs[2]) / 2.0;
  INFO("errors ", errs[0], " ", errs[1], " ", errs[2], " rate ", rate);
  CHECK(rate >= 1.0);
}

TEST_CASE("caputo derivative of t^2 and of affine functions") {
  auto mesh = TimeMesh::uniform(1.0, 1024);
  for (double alpha : {1.3, 1.5, 1.9}) {
    auto f = sample(mesh, [](double t) { return t * t; });
    auto d = caputo_left(f, alpha, 0.0, 0.0);
    for (std::size_t i = mesh->size() / 8; i < mesh->size(); i += 127) {
      const double t = mesh->node(i);
      const double ref = 2.0 * std::pow(t, 2.0 - alpha) * rgamma(3.0 - alpha);
      CHECK(std::abs(d.values[i] - ref) <= 1e-9 * std::abs(ref));
    }
  }
  auto aff = sample(mesh, [](double t) { return 3.0 - 2.0 * t; });
  auto d = caputo_left(aff, 1.5, 3.0, -2.0);
  for (double v : d.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(caputo_left(aff, 1.0, 0.0, 0.0), std::invalid_argument);
  auto tiny = SampledPath{TimeMesh::uniform(1.0, 1), {0.0, 1.0}};
  CHECK_THROWS_AS(caputo_left(tiny, 1.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("caputo of the relaxation kernel solves 0D^a w + a w = 0") {
  // w = E_alpha(-a t^alpha) has 0D_t^alpha w = -a w; the start-up singularity
  // of w'' needs a graded mesh
  const double alpha = 1.5, a = 1.0;
  std::vector<double> errs;
  for (int n : {512, 1024, 2048}) {
    auto mesh = TimeMesh::graded(1.5, n, 2.0);
    auto w = sample(mesh, [&](double t) {
      return ml_eval_real(alpha, 1.0, -a * std::pow(t, alpha));
    });
    auto d = caputo_left(w, alpha, 1.0, 0.0);
    double worst = 0.0;
    for (std::size_t i = mesh->size() / 2; i < mesh->size(); ++i) {
      const double ref = -a * w.values[i];
      worst = std::max(worst, std::abs(d.values[i] - ref) / std::abs(ref));
    }
    errs.push_back(worst);
  }
  INFO("relative errors ", errs[0], " ", errs[1], " ", errs[2]);
  CHECK(errs[2] < 2e-3);
  CHECK(errs[2] < errs[0]);  // refinement helps
}

TEST_CASE("test function derivative values") {
  PowerTestFunction spec(4.0, 1.0, 0.5, 1.5);
  auto v0 = test_fn_derivatives(spec, 0.0);
  CHECK(v0.psi == 1.0);
  CHECK(v0.d_gamma == doctest::Approx(24.0 / std::tgamma(4.5)).epsilon(1e-12));
  CHECK(v0.d_gamma == doctest::Approx(2.06332).epsilon(1e-5));
  auto vT = test_fn_derivatives(spec, 1.0);
  CHECK(vT.psi == 0.0);
  CHECK(vT.d_gamma == 0.0);
  // order -> 0 recovers psi itself
  for (double t : {0.0, 0.3, 0.8})
    CHECK(spec.right_deriv(0.0, t) == doctest::Approx(spec.psi(t)).epsilon(1e-14));
  CHECK_THROWS_AS(test_fn_derivatives(spec, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(PowerTestFunction(1.0, 1.0, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("moment integrals of the highest derivative match Beta closed forms") {
  const double l = 5.0, alpha = 1.5, gamma = 0.6, T = 2.0;
  PowerTestFunction spec(l, T, gamma, alpha);
  const double s = alpha + gamma;
  auto f0 = [&](double t) { return spec.right_deriv(s, t); };
  auto f1 = [&](double t) { return t * spec.right_deriv(s, t); };
  const double I0 = quad::integrate(f0, 0.0, T);
  const double I1 = quad::integrate(f1, 0.0, T);
  const double ref0 = gamma_ratio(l + 1.0, l + 2.0 - s) * std::pow(T, 1.0 - s);
  const double ref1 = gamma_ratio(l + 1.0, l + 3.0 - s) * std::pow(T, 2.0 - s);
  CHECK(std::abs(I0 - ref0) <= 1e-8 * std::abs(ref0));
  CHECK(std::abs(I1 - ref1) <= 1e-8 * std::abs(ref1));
}

TEST_CASE("integration by parts residual") {
  SUBCASE("f = t^2 against the test function, with refinement") {
    const double alpha = 1.5;
    std::vector<double> res;
    for (int n : {256, 512, 1024, 2048}) {
      auto mesh = TimeMesh::uniform(1.0, n);
      auto f = sample(mesh, [](double t) { return t * t; });
      auto g = sample(mesh, [](double t) { return std::pow(1.0 - t, 4.0); });
      res.push_back(ibp_residual(f, g, alpha, 0.0, 0.0));
    }
    INFO("residuals ", res[0], " ", res[1], " ", res[2], " ", res[3]);
    CHECK(res[3] <= 1e-6);
    const double rate = std::log2(res[0] / res[3]) / 3.0;
    CHECK(rate >= 1.0);
  }
  SUBCASE("affine f gives zero on both sides") {
    auto mesh = TimeMesh::uniform(1.0, 256);
    auto f = sample(mesh, [](double t) { return 2.0 + 3.0 * t; });
    auto g = sample(mesh, [](double t) { return std::pow(1.0 - t, 4.0); });
    CHECK(ibp_residual(f, g, 1.5, 2.0, 3.0) <= 1e-14);
  }
  SUBCASE("alpha = 2 reduces to the classical identity") {
    auto mesh = TimeMesh::uniform(1.0, 2048);
    auto f = sample(mesh, [](double t) { return t * t * (1.0 + 0.5 * t); });
    auto g = sample(mesh, [](double t) { return std::pow(1.0 - t, 4.0); });
    CHECK(ibp_residual(f, g, 2.0, 0.0, 0.0) <= 1e-6);
  }
  SUBCASE("boundary condition on g is enforced") {
    auto mesh = TimeMesh::uniform(1.0, 256);
    auto f = sample(mesh, [](double t) { return t * t; });
    auto bad = sample(mesh, [](double t) { return 1.0 - t; });  // g'(T) != 0
    CHECK_THROWS_AS(ibp_residual(f, bad, 1.5, 0.0, 0.0), std::invalid_argument);
  }
}
