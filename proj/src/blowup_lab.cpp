#include "fracwave/blowup_lab.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "fracwave/special.hpp"

namespace fracwave {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::blowup: return "blowup";
    case Verdict::global_small_data: return "global-small-data";
    case Verdict::outside_theorems: return "outside-theorems";
  }
  return "?";
}

RegimePrediction classify_regime(const ProblemParams& params, const MomentData& m,
                                 bool alpha_is_2) {
  params.validate();
  if (alpha_is_2 != (params.alpha == 2.0))
    throw std::invalid_argument("alpha_is_2 flag contradicts params.alpha");

  RegimePrediction out;
  const double s = params.alpha + params.gamma;
  const double crit = params.p * (1.0 - params.gamma);
  const double d_bound = 1.0 + params.gamma / (params.alpha - 1.0);
  auto rec = [&](const std::string& name, double lhs, double rhs, bool holds) {
    out.hypotheses.push_back({name, lhs, rhs, holds});
    return holds;
  };
  const bool subcrit = rec("p(1-gamma) <= 1", crit, 1.0, crit <= 1.0);

  if (alpha_is_2) {
    if (subcrit) {
      out.verdict = Verdict::blowup;
      out.theorem_case = "Thm3.8";
    } else {
      out.verdict = Verdict::outside_theorems;
    }
    return out;
  }

  const bool m1_zero = rec("m1 = 0", m.m1, 0.0, std::abs(m.m1) <= 1e-12);
  const bool m1_pos = rec("m1 > 0", m.m1, 0.0, m.m1 > 0.0);
  const bool s_gt2 = rec("alpha+gamma > 2", s, 2.0, s > 2.0);
  const bool s_eq2 = std::abs(s - 2.0) <= 1e-12;
  const bool s_le2 = s <= 2.0 + 1e-12;

  if (s_gt2 && subcrit) {
    out.verdict = Verdict::blowup;
    out.theorem_case = "Thm3.7(a)";
    return out;
  }
  if (s_le2 && m1_zero && subcrit) {
    out.verdict = Verdict::blowup;
    out.theorem_case = "Thm3.7(b)";
    return out;
  }
  if (s_eq2 && m1_pos && subcrit) {
    out.verdict = Verdict::blowup;
    out.theorem_case = "Thm3.7(c)";
    return out;
  }
  if (s < 2.0 && m1_pos &&
      rec("p < 1 + gamma/(alpha-1)", params.p, d_bound, params.p < d_bound)) {
    out.verdict = Verdict::blowup;
    out.theorem_case = "Thm3.7(d)";
    return out;
  }

  if (s >= 2.0 && !subcrit) {
    out.verdict = Verdict::global_small_data;
    out.theorem_case = "Thm3.11(i)";
    return out;
  }
  if (s < 2.0 && !subcrit && m.u1_identically_zero) {
    out.verdict = Verdict::global_small_data;
    out.theorem_case = "Thm3.11(ii)";
    return out;
  }
  if (s < 2.0 &&
      rec("p >= 1 + gamma/(alpha-1)", params.p, d_bound, params.p >= d_bound)) {
    out.verdict = Verdict::global_small_data;
    out.theorem_case = "Thm3.11(iii)";
    return out;
  }
  out.verdict = Verdict::outside_theorems;
  return out;
}

std::string scalar_case_tag(const std::string& pde_tag) {
  if (pde_tag == "Thm3.8") return "Cor2.6(iv)";
  if (pde_tag.rfind("Thm3.7(", 0) == 0 && pde_tag.size() >= 9) {
    return std::string("Cor2.5(vi)(") + pde_tag[7] + ")";
  }
  return pde_tag;
}

CriterionConstants calibrate_constants(const ProblemParams& params, double l) {
  params.validate();
  if (!(params.b > 0.0)) throw std::invalid_argument("calibration needs b > 0");
  const double s = params.alpha + params.gamma;
  const double pp = params.p / (params.p - 1.0);  // conjugate exponent
  if (l <= 0.0) l = std::ceil(params.p * s / (params.p - 1.0)) + 1.0;
  // Beta-integral convergence of the split: l - sigma p' + 1 > 0 for both
  // sigma = gamma and sigma = alpha + gamma
  if (!(l + 1.0 - s * pp > 0.0))
    throw std::invalid_argument("test exponent l too small: divergent Beta integral");

  const double eps = params.b / 4.0;
  const double young = std::pow(eps * params.p, -pp / params.p) / pp;
  const double cg = gamma_ratio(l + 1.0, l + 1.0 - params.gamma);
  const double cag = gamma_ratio(l + 1.0, l + 1.0 - s);
  const double beta_g = 1.0 / (l + 1.0 - params.gamma * pp);
  const double beta_ag = 1.0 / (l + 1.0 - s * pp);

  CriterionConstants out;
  out.l = l;
  out.K1 = young * std::pow(params.a, pp) * std::pow(cg, pp) * beta_g;
  out.K2 = young * std::pow(cag, pp) * beta_ag;
  out.normalizer = std::min({params.b / 2.0, gamma_ratio(l + 1.0, l + 2.0 - s),
                             gamma_ratio(l + 1.0, l + 3.0 - s)});
  out.trace = {{"epsilon", eps},
               {"young_constant", young},
               {"p_conjugate", pp},
               {"deriv_coeff_gamma", cg},
               {"deriv_coeff_alpha_gamma", cag},
               {"beta_integral_gamma", beta_g},
               {"beta_integral_alpha_gamma", beta_ag},
               {"moment0_coeff", gamma_ratio(l + 1.0, l + 2.0 - s)},
               {"moment1_coeff", gamma_ratio(l + 1.0, l + 3.0 - s)},
               {"normalizer", out.normalizer}};
  return out;
}

bool remark_criterion(double T, const MomentData& m, const CriterionConstants& c,
                      const ProblemParams& params) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double s = params.alpha + params.gamma;
  const double lhs = c.normalizer * (T * m.m1 + m.m0);
  const double rhs = c.K1 * std::pow(T, s - params.p * params.gamma / (params.p - 1.0)) +
                     c.K2 * std::pow(T, -s / (params.p - 1.0));
  return lhs > rhs;
}

namespace {

struct SimResult {
  std::string observed;
  std::optional<double> t_star;
  SolveOutcome scalar_outcome;  // trajectory for rate fits (scalar runs)
  bool have_scalar = false;
};

SimResult simulate_scalar(const CaseConfig& cfg, double scale) {
  SimResult r;
  ScalarIvp ivp{cfg.params, cfg.w0 * scale, cfg.w1 * scale};
  try {
    auto out = detect_blowup(ivp, cfg.horizon, cfg.base_steps);
    r.observed = to_string(out.status);
    if (out.status == SolveStatus::blowup) r.t_star = out.t_star;
    r.scalar_outcome = std::move(out);
    r.have_scalar = true;
  } catch (const IndeterminateRefinement&) {
    r.observed = "unconfirmed";
  }
  return r;
}

SimResult simulate_pde(const CaseConfig& cfg, double scale) {
  SimResult r;
  SpectralDomain dom(cfg.dimension, cfg.modes);
  std::vector<double> c0(dom.num_modes(), 0.0), c1(dom.num_modes(), 0.0);
  for (auto& [k, amp] : cfg.u0_modes) c0.at(k) = amp * scale;
  for (auto& [k, amp] : cfg.u1_modes) c1.at(k) = amp * scale;
  auto u0 = dom.make_field(std::move(c0));
  auto u1 = dom.make_field(std::move(c1));
  try {
    auto out = pde_detect_blowup(dom, u0, u1, cfg.params, cfg.horizon, cfg.base_steps);
    r.observed = to_string(out.status);
    if (out.status == SolveStatus::blowup) r.t_star = out.t_star;
  } catch (const IndeterminateRefinement&) {
    r.observed = "unconfirmed";
  }
  return r;
}

SimResult simulate(const CaseConfig& cfg, double scale) {
  return cfg.solver == CaseConfig::Solver::scalar ? simulate_scalar(cfg, scale)
                                                  : simulate_pde(cfg, scale);
}

MomentData config_moments(const CaseConfig& cfg) {
  MomentData m;
  if (cfg.solver == CaseConfig::Solver::scalar) {
    m.m0 = cfg.w0;
    m.m1 = cfg.w1;
    m.u1_identically_zero = cfg.w1 == 0.0;
  } else {
    SpectralDomain dom(cfg.dimension, cfg.modes);
    const double fm = dom.first_moment_coeff();
    for (auto& [k, amp] : cfg.u0_modes)
      if (k == 0) m.m0 = fm * amp;
    for (auto& [k, amp] : cfg.u1_modes)
      if (k == 0) m.m1 = fm * amp;
    m.u1_identically_zero = cfg.u1_modes.empty();
  }
  return m;
}

}  // namespace

RegimeReport run_case(const CaseConfig& cfg) {
  cfg.params.validate();
  RegimeReport rep;
  rep.params = cfg.params;
  rep.moments = config_moments(cfg);
  rep.prediction = classify_regime(cfg.params, rep.moments, cfg.params.alpha == 2.0);
  if (cfg.solver == CaseConfig::Solver::scalar)
    rep.prediction.theorem_case = scalar_case_tag(rep.prediction.theorem_case);
  rep.constants = calibrate_constants(cfg.params);

  switch (rep.prediction.verdict) {
    case Verdict::blowup: {
      SimResult sim = simulate(cfg, 1.0);
      rep.observed = sim.observed;
      rep.t_star = sim.t_star;
      rep.agreement = sim.observed == "blowup";
      break;
    }
    case Verdict::global_small_data: {
      // "sufficiently small" realized by bisection over the data scale
      double scale = 1.0;
      rep.agreement = false;
      for (int k = 0; k <= cfg.max_bisections; ++k, scale *= 0.5) {
        SimResult sim = simulate(cfg, scale);
        rep.observed = sim.observed;
        rep.t_star = sim.t_star;
        if (sim.observed == "global-to-horizon") {
          rep.verified_scale = scale;
          rep.agreement = true;
          if (cfg.fit_rate && sim.have_scalar && cfg.rate_window_hi > 0.0) {
            try {
              rep.rate_fits.push_back(estimate_rate(sim.scalar_outcome, cfg.rate_beta,
                                                    cfg.rate_window_lo,
                                                    cfg.rate_window_hi));
            } catch (const RateUndefined&) {
            }
          }
          break;
        }
      }
      break;
    }
    case Verdict::outside_theorems: {
      SimResult sim = simulate(cfg, 1.0);
      rep.observed = sim.observed;
      rep.t_star = sim.t_star;
      rep.agreement = sim.observed != "unconfirmed";  // observation only, no claim
      break;
    }
  }
  return rep;
}

std::vector<PhaseRow> sweep(const SweepGrid& grid) {
  struct Cell {
    std::size_t ia, ig, ip, is;
  };
  std::vector<Cell> cells;
  for (std::size_t ia = 0; ia < grid.alphas.size(); ++ia)
    for (std::size_t ig = 0; ig < grid.gammas.size(); ++ig)
      for (std::size_t ip = 0; ip < grid.ps.size(); ++ip)
        for (std::size_t is = 0; is < grid.scales.size(); ++is)
          cells.push_back({ia, ig, ip, is});

  std::vector<PhaseRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      PhaseRow& row = rows[i];
      row.alpha = grid.alphas[c.ia];
      row.gamma = grid.gammas[c.ig];
      row.p = grid.ps[c.ip];
      row.scale = grid.scales[c.is];
      try {
        ProblemParams params{row.alpha, row.gamma, row.p, grid.a, grid.b};
        params.validate();
        if (grid.solver == CaseConfig::Solver::scalar) {
          MomentData m{row.scale, grid.w1, grid.w1 == 0.0};
          auto pred = classify_regime(params, m, params.alpha == 2.0);
          row.prediction = to_string(pred.verdict);
          row.theorem_case = scalar_case_tag(pred.theorem_case);
          ScalarIvp ivp{params, row.scale, grid.w1};
          auto out = detect_blowup(ivp, grid.horizon, grid.base_steps);
          row.observed = to_string(out.status);
          if (out.status == SolveStatus::blowup) row.t_star = out.t_star;
        } else {
          SpectralDomain dom(grid.dimension, grid.modes);
          MomentData m{dom.first_moment_coeff() * row.scale, 0.0, true};
          auto pred = classify_regime(params, m, params.alpha == 2.0);
          row.prediction = to_string(pred.verdict);
          row.theorem_case = pred.theorem_case;
          std::vector<double> c0(dom.num_modes(), 0.0);
          c0[0] = row.scale;
          auto u0 = dom.make_field(std::move(c0));
          auto zero = dom.make_field(std::vector<double>(dom.num_modes(), 0.0));
          auto out =
              pde_detect_blowup(dom, u0, zero, params, grid.horizon, grid.base_steps);
          row.observed = to_string(out.status);
          if (out.status == SolveStatus::blowup) row.t_star = out.t_star;
        }
      } catch (const std::exception& e) {
        row.error = e.what();
        if (row.observed.empty()) row.observed = "unconfirmed";
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(grid.threads, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (int i = 0; i + 1 < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace fracwave
