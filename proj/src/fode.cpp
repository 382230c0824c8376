#include "fracwave/fode.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "fracwave/mlf.hpp"
#include "fracwave/special.hpp"

namespace fracwave {

void ProblemParams::validate() const {
  if (!(alpha > 1.0) || alpha > 2.0)
    throw std::invalid_argument("alpha must lie in (1, 2]");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("b must be nonnegative");
}

const char* to_string(SolveStatus s) {
  return s == SolveStatus::blowup ? "blowup" : "global-to-horizon";
}

StepFailure::StepFailure(std::size_t node_index, double t)
    : std::runtime_error("corrector failed to converge at node " +
                         std::to_string(node_index) + " (t = " + std::to_string(t) + ")"),
      node(node_index),
      time(t) {}

namespace {
std::string history_message(const std::vector<RefinementEntry>& h) {
  std::ostringstream os;
  os << "refinement did not settle; crossing times:";
  for (const auto& e : h) {
    os << " N=" << e.steps << " -> ";
    if (e.t_cross >= 0.0)
      os << e.t_cross;
    else
      os << "none";
  }
  return os.str();
}
}  // namespace

IndeterminateRefinement::IndeterminateRefinement(const std::vector<RefinementEntry>& h)
    : std::runtime_error(history_message(h)), history(h) {}

MlKernel::MlKernel(double alpha, double rho, double a) : alpha_(alpha), rho_(rho), a_(a) {
  if (!(alpha > 0.0) || alpha > 2.0 || !(rho > 0.0) || !(a >= 0.0))
    throw std::invalid_argument("bad kernel parameters");
}

double MlKernel::F(double x) const {
  if (x == 0.0) return 0.0;
  return std::pow(x, rho_) * ml_eval_real(alpha_, rho_ + 1.0, -a_ * std::pow(x, alpha_), 1e-9);
}

double MlKernel::G(double x) const {
  if (x == 0.0) return 0.0;
  return std::pow(x, rho_ + 1.0) *
         ml_eval_real(alpha_, rho_ + 2.0, -a_ * std::pow(x, alpha_), 1e-9);
}

double linear_solution(const ScalarIvp& ivp, double t) {
  ivp.params.validate();
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  const double a = ivp.params.a, alpha = ivp.params.alpha;
  if (t == 0.0) return ivp.w0;
  const double z = -a * std::pow(t, alpha);
  return ml_eval_real(alpha, 1.0, z, 1e-10) * ivp.w0 +
         t * ml_eval_real(alpha, 2.0, z, 1e-10) * ivp.w1;
}

SampledPath linear_solution(const ScalarIvp& ivp, const SampledPath& forcing) {
  ivp.params.validate();
  const auto& P = ivp.params;
  MlKernel ker(P.alpha, P.alpha + P.gamma, P.a);
  const auto& t = forcing.mesh->nodes();
  const std::size_t n = t.size();
  std::vector<double> out(n);
  out[0] = ivp.w0;
  for (std::size_t i = 1; i < n; ++i) {
    double acc = linear_solution(ivp, t[i]);
    double Fc = ker.F(t[i]), Gc = ker.G(t[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double a2 = t[i] - t[j + 1];
      const double h = t[j + 1] - t[j];
      const double Fa = ker.F(a2), Ga = ker.G(a2);
      const double dG = Gc - Ga;
      acc += (forcing.values[j] * (h * Fc - dG) + forcing.values[j + 1] * (dG - h * Fa)) / h;
      Fc = Fa;
      Gc = Ga;
    }
    out[i] = acc;
  }
  return {forcing.mesh, std::move(out)};
}

namespace {

struct Stepper {
  const ScalarIvp& ivp;
  const MeshPtr& mesh;
  const VolterraOptions& opts;
  MlKernel ker;
  double threshold, trigger;

  std::vector<double> t{0.0}, w, f;
  std::vector<long> gidx{0};  // index on the original uniform grid, -1 off-grid
  double h0 = 0.0;
  bool grid_uniform = false;
  std::vector<double> Fu, Gu;  // lag tables F(m h0), G(m h0)

  Stepper(const ScalarIvp& ivp_, const MeshPtr& mesh_, const VolterraOptions& opts_)
      : ivp(ivp_),
        mesh(mesh_),
        opts(opts_),
        ker(ivp_.params.alpha, ivp_.params.alpha + ivp_.params.gamma, ivp_.params.a) {
    const double scale0 = std::max({1.0, std::abs(ivp.w0), std::abs(ivp.w1)});
    threshold = opts.threshold > 0.0 ? opts.threshold : 1e6 * scale0;
    trigger = opts.halving_trigger > 0.0 ? opts.halving_trigger : 1e3 * scale0;
    if (!(threshold > std::max(std::abs(ivp.w0), 1.0)))
      throw std::invalid_argument("threshold must exceed max(|w0|, 1)");
    w.push_back(ivp.w0);
    f.push_back(std::pow(std::abs(ivp.w0), ivp.params.p));
    grid_uniform = mesh->is_uniform();
    h0 = mesh->node(1) - mesh->node(0);
    if (grid_uniform && ivp.params.b != 0.0) {
      Fu.assign(mesh->size(), 0.0);
      Gu.assign(mesh->size(), 0.0);
      for (std::size_t m = 1; m < mesh->size(); ++m) {
        Fu[m] = ker.F(m * h0);
        Gu[m] = ker.G(m * h0);
      }
    }
  }

  double hom(double time) const { return linear_solution(ivp, time); }

  // history part of the convolution (cells up to t_{n-1}) at time tn
  double history_sum(double tn, long tn_gidx) const {
    if (ivp.params.b == 0.0 || t.size() < 2) return 0.0;
    const std::size_t n = t.size();
    double acc = 0.0;
    const bool fast = grid_uniform && tn_gidx >= 0;
    double Fc = 0.0, Gc = 0.0;
    if (!fast) {
      Fc = ker.F(tn - t[0]);
      Gc = ker.G(tn - t[0]);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double h = t[j + 1] - t[j];
      double Fcc, Gcc, Faa, Gaa;
      if (fast && gidx[j] >= 0 && gidx[j + 1] >= 0) {
        Fcc = Fu[tn_gidx - gidx[j]];
        Gcc = Gu[tn_gidx - gidx[j]];
        Faa = Fu[tn_gidx - gidx[j + 1]];
        Gaa = Gu[tn_gidx - gidx[j + 1]];
      } else {
        Fcc = fast ? ker.F(tn - t[j]) : Fc;
        Gcc = fast ? ker.G(tn - t[j]) : Gc;
        Faa = ker.F(tn - t[j + 1]);
        Gaa = ker.G(tn - t[j + 1]);
      }
      const double dG = Gcc - Gaa;
      acc += (f[j] * (h * Fcc - dG) + f[j + 1] * (dG - h * Faa)) / h;
      Fc = Faa;
      Gc = Gaa;
    }
    return acc;
  }

  struct StepResult {
    double value = 0.0;
    bool converged = false;
    bool crossed = false;
    bool runaway = false;  // corrector diverged through the threshold
  };

  StepResult attempt(double tn, long tn_gidx) const {
    const auto& P = ivp.params;
    StepResult r;
    if (P.b == 0.0) {
      r.value = hom(tn);
      r.converged = true;
      r.crossed = std::abs(r.value) > threshold;
      return r;
    }
    const double base = hom(tn) + P.b * history_sum(tn, tn_gidx);
    const double hl = tn - t.back();
    double Fh, Gh;
    if (grid_uniform && tn_gidx >= 0 && gidx.back() >= 0) {
      Fh = Fu[tn_gidx - gidx.back()];
      Gh = Gu[tn_gidx - gidx.back()];
    } else {
      Fh = ker.F(hl);
      Gh = ker.G(hl);
    }
    const double wA = (hl * Fh - Gh) / hl;  // weight on f_{n-1}
    const double wB = Gh / hl;              // weight on f_n
    double wc = base + P.b * Fh * f.back();  // rectangle predictor
    for (int it = 0; it < opts.max_corrector_iters; ++it) {
      const double fn = std::pow(std::abs(wc), P.p);
      const double wn = base + P.b * (wA * f.back() + wB * fn);
      if (!std::isfinite(wn) || std::abs(wn) > 1e3 * threshold) {
        // fixed point lost: let the caller halve the step; only a step
        // already at the halving floor reports this as a crossing
        r.value = std::isfinite(wn) ? wn : wc;
        r.runaway = std::abs(r.value) > threshold;
        return r;
      }
      if (std::abs(wn - wc) <= opts.fp_tol * std::max(1.0, std::abs(wn))) {
        r.value = wn;
        r.converged = true;
        r.crossed = std::abs(wn) > threshold;
        return r;
      }
      wc = wn;
    }
    return r;  // not converged
  }

  SolveOutcome make_outcome(SolveStatus status, double t_cross) const {
    SolveOutcome out;
    out.trajectory = {TimeMesh::from_nodes(t), w};
    out.status = status;
    if (status == SolveStatus::blowup) {
      out.t_star = t_cross;
      out.refinement_history = {{static_cast<int>(mesh->size()) - 1, t_cross}};
    }
    return out;
  }

  SolveOutcome run() {
    const double horizon = mesh->horizon();
    std::size_t next_orig = 1;
    bool halving = false;
    double h_cur = h0;
    int halvings = 0;

    while (t.back() < horizon * (1.0 - 1e-14)) {
      double tn;
      long tn_gidx = -1;
      if (!halving) {
        tn = mesh->node(next_orig);
        if (grid_uniform) tn_gidx = static_cast<long>(next_orig);
      } else {
        tn = std::min(t.back() + h_cur, horizon);
      }

      StepResult res = attempt(tn, tn_gidx);
      while (!res.converged) {
        if (halvings >= opts.max_halvings) {
          if (res.runaway) {  // resolved as far as the floor allows
            res.converged = true;
            res.crossed = true;
            break;
          }
          throw StepFailure(t.size(), tn);
        }
        ++halvings;
        halving = true;
        tn = t.back() + (tn - t.back()) / 2.0;
        h_cur = tn - t.back();
        tn_gidx = -1;
        res = attempt(tn, tn_gidx);
      }

      const double prev = std::abs(w.back());
      t.push_back(tn);
      gidx.push_back(tn_gidx);
      w.push_back(res.value);
      f.push_back(std::pow(std::abs(res.value), ivp.params.p));

      if (res.crossed) return make_outcome(SolveStatus::blowup, tn);

      // move the original-mesh cursor past the accepted node
      while (next_orig + 1 < mesh->size() &&
             mesh->node(next_orig) <= tn * (1.0 + 1e-14) + 1e-300)
        ++next_orig;

      // step control: halve while the path is moving fast per step (the
      // approach to a crossing), back off as soon as the growth is modest
      // again, so slow drifts above the trigger keep the original
      // resolution. The 10x-scale guard keeps ordinary oscillations from
      // triggering refinement.
      const double cur = std::abs(res.value);
      const double scale0 = std::max({1.0, std::abs(ivp.w0), std::abs(ivp.w1)});
      const bool fast_growth =
          (cur > trigger && cur > 1.8 * std::max(prev, 1e-300)) ||
          (cur > 10.0 * scale0 && cur > 3.0 * std::max(prev, 1e-300));
      if (fast_growth && halvings < opts.max_halvings) {
        const double next_h = halving ? h_cur : (mesh->node(next_orig) - tn);
        h_cur = std::max(next_h / 2.0, 1e-12 * horizon);
        halving = true;
        ++halvings;
      } else if (halving && !fast_growth) {
        const double grid_h = mesh->node(next_orig) - tn;
        if (grid_h > 0.0) {
          h_cur = std::min(h_cur * 2.0, grid_h);
          if (h_cur >= grid_h * (1.0 - 1e-12)) halving = false;
        }
      }
    }
    return make_outcome(SolveStatus::global_to_horizon, 0.0);
  }
};

}  // namespace

SolveOutcome solve_volterra(const ScalarIvp& ivp, const MeshPtr& mesh,
                            const VolterraOptions& opts) {
  ivp.params.validate();
  Stepper st(ivp, mesh, opts);
  return st.run();
}

SolveOutcome detect_blowup(const ScalarIvp& ivp, double horizon, int base_steps,
                           const VolterraOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  auto run = [&](int n) { return solve_volterra(ivp, TimeMesh::uniform(horizon, n), opts); };
  auto fut1 = std::async(std::launch::async, run, base_steps);
  auto fut2 = std::async(std::launch::async, run, 2 * base_steps);
  SolveOutcome r4 = run(4 * base_steps);
  SolveOutcome r1 = fut1.get();
  SolveOutcome r2 = fut2.get();

  auto cross = [](const SolveOutcome& r) {
    return r.status == SolveStatus::blowup ? *r.t_star : -1.0;
  };
  std::vector<RefinementEntry> hist{{base_steps, cross(r1)},
                                    {2 * base_steps, cross(r2)},
                                    {4 * base_steps, cross(r4)}};

  const int crossings = (r1.status == SolveStatus::blowup) +
                        (r2.status == SolveStatus::blowup) +
                        (r4.status == SolveStatus::blowup);
  if (crossings == 0) {
    r4.refinement_history = hist;
    return r4;
  }
  if (crossings == 3) {
    const double t1 = *r1.t_star, t2 = *r2.t_star, t3 = *r4.t_star;
    const bool settled =
        std::abs(t2 - t1) <= 0.05 * t2 && std::abs(t3 - t2) <= 0.05 * t3;
    if (settled) {
      double tstar = t3;
      const double denom = (t3 - t2) - (t2 - t1);
      if (std::abs(denom) > 1e-14 * horizon) {
        const double extrap = t3 - (t3 - t2) * (t3 - t2) / denom;
        if (std::isfinite(extrap) && extrap > 0.0 && extrap <= horizon &&
            std::abs(extrap - t3) <= 0.05 * t3)
          tstar = extrap;
      }
      r4.t_star = tstar;
      r4.refinement_history = hist;
      return r4;
    }
  }
  throw IndeterminateRefinement(hist);
}

RateFit fit_log_slope(const SampledPath& y, double t_lo, double t_hi) {
  return fit_log_slope(y.mesh->nodes(), y.values, t_lo, t_hi);
}

RateFit fit_log_slope(const std::vector<double>& ts, const std::vector<double>& vs,
                      double t_lo, double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("bad fit window");
  if (ts.size() != vs.size()) throw std::invalid_argument("size mismatch");
  std::vector<double> xs, ys;
  int sign = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    if (t < t_lo || t > t_hi) continue;
    const double v = vs[i];
    if (v == 0.0) throw RateUndefined("zero value inside the fit window");
    const int s = v > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) throw RateUndefined("sign change inside the fit window");
    xs.push_back(std::log(t));
    ys.push_back(std::log(std::abs(v)));
  }
  if (xs.size() < 8) throw RateUndefined("too few points inside the fit window");
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - my - slope * (xs[i] - mx);
    ss += r * r;
  }
  const double se = std::sqrt(ss / std::max<std::size_t>(n - 2, 1) / sxx);
  return {slope, 2.0 * se, static_cast<int>(n)};
}

RateFit estimate_rate(const SolveOutcome& outcome, double beta, double t_lo, double t_hi) {
  if (outcome.status != SolveStatus::global_to_horizon)
    throw std::invalid_argument("rate estimation needs a global-to-horizon outcome");
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  if (beta == 0.0) return fit_log_slope(outcome.trajectory, t_lo, t_hi);
  return fit_log_slope(frac_integral_left(outcome.trajectory, beta), t_lo, t_hi);
}

AprioriCheck apriori_check(const SolveOutcome& outcome, const PowerTestFunction& testfn,
                           double K1, double K2, double norm, const ScalarIvp& ivp) {
  ivp.params.validate();
  if (!(K1 > 0.0) || !(K2 > 0.0) || !(norm > 0.0))
    throw std::invalid_argument("constants must be positive");
  const double T = testfn.horizon;
  const auto& t = outcome.trajectory.mesh->nodes();
  const auto& w = outcome.trajectory.values;
  if (t.back() < T * (1.0 - 1e-12))
    throw std::invalid_argument("trajectory shorter than the check horizon");
  const auto& P = ivp.params;

  double integral = 0.0;
  auto dens = [&](std::size_t i) {
    return std::pow(std::abs(w[i]), P.p) * testfn.psi(std::min(t[i], T));
  };
  for (std::size_t i = 1; i < t.size() && t[i - 1] < T; ++i) {
    if (t[i] <= T) {
      integral += 0.5 * (t[i] - t[i - 1]) * (dens(i) + dens(i - 1));
    } else {
      // partial boundary cell, linear interpolation of w at T
      const double lam = (T - t[i - 1]) / (t[i] - t[i - 1]);
      const double wT = (1.0 - lam) * w[i - 1] + lam * w[i];
      const double dT = std::pow(std::abs(wT), P.p) * testfn.psi(T);
      integral += 0.5 * (T - t[i - 1]) * (dens(i - 1) + dT);
    }
  }

  const double s = P.alpha + P.gamma;
  AprioriCheck out;
  out.lhs = norm * (integral + ivp.w0 * std::pow(T, 1.0 - s) +
                    ivp.w1 * std::pow(T, 2.0 - s));
  out.rhs = K1 * std::pow(T, 1.0 - P.p * P.gamma / (P.p - 1.0)) +
            K2 * std::pow(T, 1.0 - P.p * s / (P.p - 1.0));
  out.holds = out.lhs <= out.rhs * 1.05;
  return out;
}

}  // namespace fracwave
