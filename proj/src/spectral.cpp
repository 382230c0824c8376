#include "fracwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "fracwave/mlf.hpp"

namespace fracwave {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMlTol = 1e-9;
}  // namespace

SpectralDomain::SpectralDomain(int dimension, int modes, int grid_factor)
    : dim_(dimension), modes_(modes) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("dimension must be 1 or 2");
  if (modes < 1) throw std::invalid_argument("need at least one mode");
  if (grid_factor < 2) throw std::invalid_argument("grid factor must be >= 2");
  const int M = grid_factor * modes;
  grid_axis_ = M - 1;
  sin_table_.resize(static_cast<std::size_t>(modes_) * grid_axis_);
  for (int k = 1; k <= modes_; ++k)
    for (int i = 1; i <= grid_axis_; ++i)
      sin_table_[static_cast<std::size_t>(k - 1) * grid_axis_ + (i - 1)] =
          std::sin(kPi * k * i / M);
  eig_.resize(num_modes());
  if (dim_ == 1) {
    for (int k = 1; k <= modes_; ++k) eig_[k - 1] = double(k) * k;
  } else {
    for (int kx = 1; kx <= modes_; ++kx)
      for (int ky = 1; ky <= modes_; ++ky)
        eig_[static_cast<std::size_t>(kx - 1) * modes_ + (ky - 1)] =
            double(kx) * kx + double(ky) * ky;
  }
}

double SpectralDomain::eigenvalue(int flat_mode) const { return eig_.at(flat_mode); }

std::vector<double> SpectralDomain::to_phys(const std::vector<double>& c) const {
  if (static_cast<int>(c.size()) != num_modes())
    throw std::invalid_argument("coefficient count does not match the domain");
  const int ga = grid_axis_, K = modes_;
  std::vector<double> out(num_grid(), 0.0);
  if (dim_ == 1) {
    for (int k = 0; k < K; ++k) {
      const double ck = c[k];
      if (ck == 0.0) continue;
      const double* row = &sin_table_[static_cast<std::size_t>(k) * ga];
      for (int i = 0; i < ga; ++i) out[i] += ck * row[i];
    }
    return out;
  }
  // separable synthesis: y first, then x
  std::vector<double> tmp(static_cast<std::size_t>(K) * ga, 0.0);
  for (int kx = 0; kx < K; ++kx)
    for (int ky = 0; ky < K; ++ky) {
      const double v = c[static_cast<std::size_t>(kx) * K + ky];
      if (v == 0.0) continue;
      const double* row = &sin_table_[static_cast<std::size_t>(ky) * ga];
      double* trow = &tmp[static_cast<std::size_t>(kx) * ga];
      for (int j = 0; j < ga; ++j) trow[j] += v * row[j];
    }
  for (int kx = 0; kx < K; ++kx) {
    const double* srow = &sin_table_[static_cast<std::size_t>(kx) * ga];
    const double* trow = &tmp[static_cast<std::size_t>(kx) * ga];
    for (int i = 0; i < ga; ++i) {
      const double s = srow[i];
      if (s == 0.0) continue;
      double* orow = &out[static_cast<std::size_t>(i) * ga];
      for (int j = 0; j < ga; ++j) orow[j] += s * trow[j];
    }
  }
  return out;
}

std::vector<double> SpectralDomain::to_coeffs(const std::vector<double>& phys) const {
  if (static_cast<int>(phys.size()) != num_grid())
    throw std::invalid_argument("sample count does not match the domain grid");
  const int ga = grid_axis_, K = modes_, M = ga + 1;
  const double scale = 2.0 / M;
  std::vector<double> out(num_modes(), 0.0);
  if (dim_ == 1) {
    for (int k = 0; k < K; ++k) {
      const double* row = &sin_table_[static_cast<std::size_t>(k) * ga];
      double acc = 0.0;
      for (int i = 0; i < ga; ++i) acc += phys[i] * row[i];
      out[k] = scale * acc;
    }
    return out;
  }
  std::vector<double> tmp(static_cast<std::size_t>(K) * ga, 0.0);
  for (int kx = 0; kx < K; ++kx) {
    const double* srow = &sin_table_[static_cast<std::size_t>(kx) * ga];
    double* trow = &tmp[static_cast<std::size_t>(kx) * ga];
    for (int i = 0; i < ga; ++i) {
      const double s = srow[i];
      if (s == 0.0) continue;
      const double* prow = &phys[static_cast<std::size_t>(i) * ga];
      for (int j = 0; j < ga; ++j) trow[j] += s * prow[j];
    }
  }
  for (int kx = 0; kx < K; ++kx)
    for (int ky = 0; ky < K; ++ky) {
      const double* row = &sin_table_[static_cast<std::size_t>(ky) * ga];
      const double* trow = &tmp[static_cast<std::size_t>(kx) * ga];
      double acc = 0.0;
      for (int j = 0; j < ga; ++j) acc += trow[j] * row[j];
      out[static_cast<std::size_t>(kx) * K + ky] = scale * scale * acc;
    }
  return out;
}

SpectralField SpectralDomain::make_field(std::vector<double> coeffs) const {
  SpectralField f;
  f.phys = to_phys(coeffs);
  f.coeffs = std::move(coeffs);
  return f;
}

SpectralField SpectralDomain::field_from_phys(std::vector<double> phys) const {
  SpectralField f;
  f.coeffs = to_coeffs(phys);
  f.phys = to_phys(f.coeffs);  // projection onto the retained modes
  return f;
}

double SpectralDomain::first_moment_coeff() const {
  return dim_ == 1 ? kPi / 4.0 : kPi * kPi / 16.0;
}

double SpectralDomain::first_moment(const SpectralField& field) const {
  return first_moment_coeff() * field.coeffs.at(0);
}

double sup_norm(const SpectralField& f) {
  double m = 0.0;
  for (double v : f.phys) m = std::max(m, std::abs(v));
  return m;
}

namespace {

SpectralField apply_multiplier(const SpectralDomain& dom, const SpectralField& f,
                               const std::function<double(double)>& mult) {
  std::vector<double> c(f.coeffs.size());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = f.coeffs[k] * mult(dom.eigenvalue(static_cast<int>(k)));
  return dom.make_field(std::move(c));
}

}  // namespace

SpectralField apply_p(const SpectralDomain& dom, double alpha, double t,
                      const SpectralField& f) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  if (t == 0.0) return f;
  const double ta = std::pow(t, alpha);
  return apply_multiplier(dom, f, [&](double lam) {
    return ml_eval_real(alpha, 1.0, -lam * ta, kMlTol);
  });
}

SpectralField apply_ip(const SpectralDomain& dom, double alpha, double t,
                       const SpectralField& f) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  if (t == 0.0) return apply_multiplier(dom, f, [](double) { return 0.0; });
  const double ta = std::pow(t, alpha);
  return apply_multiplier(dom, f, [&](double lam) {
    return t * ml_eval_real(alpha, 2.0, -lam * ta, kMlTol);
  });
}

SpectralField apply_memory_multiplier(const SpectralDomain& dom, double alpha,
                                      double gamma, double t, const SpectralField& f) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  const double rho = alpha + gamma;
  if (t == 0.0) return apply_multiplier(dom, f, [](double) { return 0.0; });
  const double ta = std::pow(t, alpha), tr = std::pow(t, rho - 1.0);
  return apply_multiplier(dom, f, [&](double lam) {
    return tr * ml_eval_real(alpha, rho, -lam * ta, kMlTol);
  });
}

std::vector<double> memory_kernel_coeffs(const EvolutionState& state, std::size_t n) {
  if (!state.domain) throw std::invalid_argument("state has no domain");
  if (n >= state.nodes.size() || state.forcing_coeffs.size() <= n)
    throw std::invalid_argument("forcing history incomplete at the requested node");
  const auto& dom = *state.domain;
  const auto& t = state.nodes;
  const int K = dom.num_modes();
  std::vector<double> acc(K, 0.0);
  if (n == 0) return acc;
  const double alpha = state.params.alpha, rho = state.params.alpha + state.params.gamma;
  for (int k = 0; k < K; ++k) {
    MlKernel ker(alpha, rho, dom.eigenvalue(k));
    double s = 0.0;
    double Fc = ker.F(t[n] - t[0]), Gc = ker.G(t[n] - t[0]);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = t[n] - t[j + 1];
      const double h = t[j + 1] - t[j];
      const double Fa = (a == 0.0) ? 0.0 : ker.F(a);
      const double Ga = (a == 0.0) ? 0.0 : ker.G(a);
      const double dG = Gc - Ga;
      s += (state.forcing_coeffs[j][k] * (h * Fc - dG) +
            state.forcing_coeffs[j + 1][k] * (dG - h * Fa)) /
           h;
      Fc = Fa;
      Gc = Ga;
    }
    acc[k] = s;
  }
  return acc;
}

SpectralField memory_kernel_apply(const EvolutionState& state, std::size_t n) {
  return state.domain->make_field(memory_kernel_coeffs(state, n));
}

namespace {

struct PdeStepper {
  const SpectralDomain& dom;
  const SpectralField& u0;
  const SpectralField& u1;
  ProblemParams P;
  const MeshPtr& mesh;
  MildSolverOptions opts;

  int K;
  double threshold = 0.0, trigger = 0.0;
  std::vector<MlKernel> kers;

  std::vector<double> t{0.0};
  std::vector<long> gidx{0};
  std::vector<std::vector<double>> C;   // coefficients per node
  std::vector<std::vector<double>> Fc;  // |u|^p coefficients per node
  std::vector<double> sup;

  bool grid_uniform = false;
  double h0 = 0.0;
  std::vector<std::vector<double>> Fu, Gu;  // per-mode lag tables

  PdeStepper(const SpectralDomain& dom_, const SpectralField& u0_, const SpectralField& u1_,
             const ProblemParams& p, const MeshPtr& mesh_, const MildSolverOptions& opts_)
      : dom(dom_), u0(u0_), u1(u1_), P(p), mesh(mesh_), opts(opts_), K(dom_.num_modes()) {
    P.a = 1.0;  // the Laplacian supplies the per-mode coefficient
    P.validate();
    if (static_cast<int>(u0.coeffs.size()) != K || static_cast<int>(u1.coeffs.size()) != K)
      throw std::invalid_argument("initial data does not match the domain");
    const double scale0 = std::max({1.0, sup_norm(u0), sup_norm(u1)});
    threshold = opts.threshold > 0.0 ? opts.threshold : 1e6 * scale0;
    trigger = opts.halving_trigger > 0.0 ? opts.halving_trigger : 1e3 * scale0;
    if (!(threshold > 1.0)) throw std::invalid_argument("threshold must exceed 1");

    kers.reserve(K);
    for (int k = 0; k < K; ++k)
      kers.emplace_back(P.alpha, P.alpha + P.gamma, dom.eigenvalue(k));

    C.push_back(u0.coeffs);
    sup.push_back(sup_norm(u0));
    Fc.push_back(forcing_of(u0.phys));

    grid_uniform = mesh->is_uniform();
    h0 = mesh->node(1) - mesh->node(0);
    if (grid_uniform && opts.nonlinearity) {
      Fu.assign(K, {});
      Gu.assign(K, {});
      for (int k = 0; k < K; ++k) {
        Fu[k].assign(mesh->size(), 0.0);
        Gu[k].assign(mesh->size(), 0.0);
        for (std::size_t m = 1; m < mesh->size(); ++m) {
          Fu[k][m] = kers[k].F(m * h0);
          Gu[k][m] = kers[k].G(m * h0);
        }
      }
    }
  }

  std::vector<double> forcing_of(const std::vector<double>& phys) const {
    std::vector<double> fp(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i)
      fp[i] = std::pow(std::abs(phys[i]), P.p);
    return dom.to_coeffs(fp);
  }

  std::vector<double> hom_coeffs(double time) const {
    std::vector<double> c(K);
    const double ta = std::pow(time, P.alpha);
    for (int k = 0; k < K; ++k) {
      const double z = -dom.eigenvalue(k) * ta;
      c[k] = ml_eval_real(P.alpha, 1.0, z, kMlTol) * u0.coeffs[k];
      if (u1.coeffs[k] != 0.0)
        c[k] += time * ml_eval_real(P.alpha, 2.0, z, kMlTol) * u1.coeffs[k];
    }
    return c;
  }

  void add_history(double tn, long tn_gidx, std::vector<double>& acc) const {
    const std::size_t n = t.size();
    if (n < 2) return;
    const bool fast = grid_uniform && tn_gidx >= 0;
    std::vector<double> Fcv(K), Gcv(K);
    bool carry = false;  // Fcv/Gcv hold the values at lag tn - t[j]
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double h = t[j + 1] - t[j];
      if (fast && gidx[j] >= 0 && gidx[j + 1] >= 0) {
        const long mc = tn_gidx - gidx[j], ma = tn_gidx - gidx[j + 1];
        for (int k = 0; k < K; ++k) {
          const double dG = Gu[k][mc] - Gu[k][ma];
          acc[k] += (Fc[j][k] * (h * Fu[k][mc] - dG) +
                     Fc[j + 1][k] * (dG - h * Fu[k][ma])) /
                    h;
        }
        carry = false;
      } else {
        if (!carry) {
          for (int k = 0; k < K; ++k) {
            Fcv[k] = kers[k].F(tn - t[j]);
            Gcv[k] = kers[k].G(tn - t[j]);
          }
        }
        const double a = tn - t[j + 1];
        for (int k = 0; k < K; ++k) {
          const double Faa = (a == 0.0) ? 0.0 : kers[k].F(a);
          const double Gaa = (a == 0.0) ? 0.0 : kers[k].G(a);
          const double dG = Gcv[k] - Gaa;
          acc[k] += (Fc[j][k] * (h * Fcv[k] - dG) + Fc[j + 1][k] * (dG - h * Faa)) / h;
          Fcv[k] = Faa;
          Gcv[k] = Gaa;
        }
        carry = true;
      }
    }
  }

  struct StepResult {
    std::vector<double> coeffs;
    std::vector<double> phys;
    std::vector<double> forcing;
    double sup = 0.0;
    bool converged = false;
    bool crossed = false;
    bool runaway = false;
  };

  StepResult attempt(double tn, long tn_gidx) const {
    StepResult r;
    std::vector<double> base = hom_coeffs(tn);
    if (!opts.nonlinearity || P.b == 0.0) {
      r.coeffs = std::move(base);
      r.phys = dom.to_phys(r.coeffs);
      r.forcing = forcing_of(r.phys);
      r.sup = 0.0;
      for (double v : r.phys) r.sup = std::max(r.sup, std::abs(v));
      r.converged = true;
      r.crossed = r.sup > threshold;
      return r;
    }
    std::vector<double> hist(K, 0.0);
    add_history(tn, tn_gidx, hist);
    for (int k = 0; k < K; ++k) base[k] += P.b * hist[k];

    const double hl = tn - t.back();
    std::vector<double> Fh(K), A(K), B(K);
    for (int k = 0; k < K; ++k) {
      double Fhh, Ghh;
      if (grid_uniform && tn_gidx >= 0 && gidx.back() >= 0) {
        Fhh = Fu[k][tn_gidx - gidx.back()];
        Ghh = Gu[k][tn_gidx - gidx.back()];
      } else {
        Fhh = kers[k].F(hl);
        Ghh = kers[k].G(hl);
      }
      Fh[k] = Fhh;
      A[k] = (hl * Fhh - Ghh) / hl;
      B[k] = Ghh / hl;
    }

    std::vector<double> c(K);
    for (int k = 0; k < K; ++k) c[k] = base[k] + P.b * Fh[k] * Fc.back()[k];

    std::vector<double> phys, fc;
    for (int it = 0; it < opts.max_corrector_iters; ++it) {
      phys = dom.to_phys(c);
      double s = 0.0;
      bool finite = true;
      for (double v : phys) {
        if (!std::isfinite(v)) {
          finite = false;
          break;
        }
        s = std::max(s, std::abs(v));
      }
      if (!finite || s > 1e3 * threshold) {
        r.sup = finite ? s : 2e3 * threshold;
        r.runaway = r.sup > threshold;
        return r;
      }
      fc = forcing_of(phys);
      double change = 0.0, scale = 1.0;
      std::vector<double> cn(K);
      for (int k = 0; k < K; ++k) {
        cn[k] = base[k] + P.b * (A[k] * Fc.back()[k] + B[k] * fc[k]);
        change = std::max(change, std::abs(cn[k] - c[k]));
        scale = std::max(scale, std::abs(cn[k]));
      }
      c.swap(cn);
      if (change <= opts.fp_tol * scale) {
        r.coeffs = std::move(c);
        r.phys = dom.to_phys(r.coeffs);
        r.forcing = forcing_of(r.phys);
        r.sup = 0.0;
        for (double v : r.phys) r.sup = std::max(r.sup, std::abs(v));
        r.converged = true;
        r.crossed = r.sup > threshold;
        return r;
      }
    }
    return r;
  }

  FieldSolveOutcome make_outcome(SolveStatus status, double t_cross) const {
    FieldSolveOutcome out;
    out.mesh = TimeMesh::from_nodes(t);
    out.supnorm = sup;
    out.coeffs = C;
    out.forcing = Fc;
    out.status = status;
    if (status == SolveStatus::blowup) {
      out.t_star = t_cross;
      out.refinement_history = {{static_cast<int>(mesh->size()) - 1, t_cross}};
    }
    return out;
  }

  FieldSolveOutcome run() {
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
          if (res.runaway) {
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

      const double prev = sup.back();
      t.push_back(tn);
      gidx.push_back(tn_gidx);
      if (res.coeffs.empty()) {  // runaway acceptance at the floor
        C.push_back(C.back());
        Fc.push_back(Fc.back());
      } else {
        C.push_back(res.coeffs);
        Fc.push_back(res.forcing);
      }
      sup.push_back(res.sup);

      if (res.crossed) return make_outcome(SolveStatus::blowup, tn);

      while (next_orig + 1 < mesh->size() &&
             mesh->node(next_orig) <= tn * (1.0 + 1e-14) + 1e-300)
        ++next_orig;

      const bool fast_growth = res.sup > trigger && res.sup > 1.8 * std::max(prev, 1e-300);
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

FieldSolveOutcome solve_mild(const SpectralDomain& dom, const SpectralField& u0,
                             const SpectralField& u1, const ProblemParams& params,
                             const MeshPtr& mesh, const MildSolverOptions& opts) {
  PdeStepper st(dom, u0, u1, params, mesh, opts);
  return st.run();
}

FieldSolveOutcome pde_detect_blowup(const SpectralDomain& dom, const SpectralField& u0,
                                    const SpectralField& u1, const ProblemParams& params,
                                    double horizon, int base_steps,
                                    const MildSolverOptions& opts) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  auto run = [&](int n) {
    return solve_mild(dom, u0, u1, params, TimeMesh::uniform(horizon, n), opts);
  };
  auto fut1 = std::async(std::launch::async, run, base_steps);
  auto fut2 = std::async(std::launch::async, run, 2 * base_steps);
  FieldSolveOutcome r4 = run(4 * base_steps);
  FieldSolveOutcome r1 = fut1.get();
  FieldSolveOutcome r2 = fut2.get();

  auto cross = [](const FieldSolveOutcome& r) {
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

EigenFunctional eigenfunctional(const SpectralDomain& dom, const FieldSolveOutcome& run,
                                const ProblemParams& params, double u1_moment) {
  const double fm = dom.first_moment_coeff();
  const std::size_t n = run.mesh->size();
  if (run.coeffs.size() != n || run.forcing.size() != n)
    throw std::invalid_argument("run does not carry a full history");

  std::vector<double> wv(n), graw(n);
  for (std::size_t j = 0; j < n; ++j) {
    wv[j] = fm * run.coeffs[j][0];
    graw[j] = fm * run.forcing[j][0];
  }
  EigenFunctional out;
  out.w = {run.mesh, wv};
  out.forcing = frac_integral_left({run.mesh, graw}, params.gamma);

  // residual of 0D^alpha w + lambda1 w = forcing over the settled part of
  // the mesh (the first eighth carries the start-up differencing error)
  SampledPath dw = caputo_left(out.w, params.alpha, wv[0], u1_moment);
  const double l1 = dom.lambda1();
  double res = 0.0, scale = 0.0;
  for (std::size_t j = n / 8; j < n; ++j) {
    const double r = dw.values[j] + l1 * wv[j] - out.forcing.values[j];
    res = std::max(res, std::abs(r));
    scale = std::max(scale,
                     std::abs(dw.values[j]) + l1 * std::abs(wv[j]) +
                         std::abs(out.forcing.values[j]));
  }
  out.residual = res;
  out.residual_scale = scale;

  // Jensen margin: <I^g |u|^p, phi1> - I^g |w|^p >= 0 pointwise
  std::vector<double> wp(n);
  for (std::size_t j = 0; j < n; ++j) wp[j] = std::pow(std::abs(wv[j]), params.p);
  SampledPath igw = frac_integral_left({run.mesh, wp}, params.gamma);
  double margin = 0.0;
  bool first = true;
  for (std::size_t j = 0; j < n; ++j) {
    const double m = out.forcing.values[j] - igw.values[j];
    if (first || m < margin) {
      margin = m;
      first = false;
    }
  }
  out.jensen_min_margin = margin;
  return out;
}

DecayProbe operator_decay_probe(const SpectralDomain& dom, double alpha, double gamma,
                                const SpectralField& u0, const std::vector<double>& times) {
  if (times.size() < 8) throw std::invalid_argument("need at least 8 probe times");
  if (!(times.back() >= 100.0 * times.front()))
    throw std::invalid_argument("probe times must span at least two decades");
  if (sup_norm(u0) == 0.0) throw std::invalid_argument("degenerate (zero) probe input");
  std::vector<double> np, nip, nmem;
  np.reserve(times.size());
  for (double t : times) {
    np.push_back(sup_norm(apply_p(dom, alpha, t, u0)));
    nip.push_back(sup_norm(apply_ip(dom, alpha, t, u0)));
    nmem.push_back(sup_norm(apply_memory_multiplier(dom, alpha, gamma, t, u0)));
  }
  DecayProbe out;
  out.p_fit = fit_log_slope(times, np, times.front(), times.back());
  out.ip_fit = fit_log_slope(times, nip, times.front(), times.back());
  out.memory_fit = fit_log_slope(times, nmem, times.front(), times.back());
  return out;
}

}  // namespace fracwave
