// Command-line front end: point evaluation of the special function, scalar
// and spectral solves with blow-up detection, operator decay probes,
// constant calibration, and phase-diagram sweeps.
//
// Exit codes: 0 success, 1 validation/usage error, 2 numerical failure
// (indeterminate refinement, corrector breakdown, overflow). Errors are
// mirrored as a JSON document on stderr. FRACWAVE_LOG=debug enables
// progress notes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "fracwave/io.hpp"
#include "fracwave/mlf.hpp"

using namespace fracwave;
using nlohmann::json;

namespace {

bool log_debug() {
  const char* v = std::getenv("FRACWAVE_LOG");
  return v && std::string(v) == "debug";
}

void emit_error(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << content;
}

std::vector<std::pair<int, double>> parse_modes(const std::vector<std::string>& specs,
                                                int dim, int modes_per_axis) {
  std::vector<std::pair<int, double>> out;
  for (const auto& s : specs) {
    const auto c1 = s.find(':');
    if (c1 == std::string::npos) throw std::invalid_argument("bad mode spec: " + s);
    if (dim == 1) {
      const int k = std::stoi(s.substr(0, c1));
      const double amp = std::stod(s.substr(c1 + 1));
      if (k < 1 || k > modes_per_axis)
        throw std::invalid_argument("mode index out of range in: " + s);
      out.emplace_back(k - 1, amp);
    } else {
      const auto c2 = s.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw std::invalid_argument("2D mode spec needs kx:ky:amp: " + s);
      const int kx = std::stoi(s.substr(0, c1));
      const int ky = std::stoi(s.substr(c1 + 1, c2 - c1 - 1));
      const double amp = std::stod(s.substr(c2 + 1));
      if (kx < 1 || kx > modes_per_axis || ky < 1 || ky > modes_per_axis)
        throw std::invalid_argument("mode index out of range in: " + s);
      out.emplace_back((kx - 1) * modes_per_axis + (ky - 1), amp);
    }
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) xs[i] = std::pow(10.0, a + (b - a) * i / (n - 1.0));
  return xs;
}

struct MlfArgs {
  double alpha = 1.5, beta = 1.0, z = 0.0, zi = 0.0, tol = 1e-10;
};

int run_mlf(const MlfArgs& a) {
  const MlValue v = ml_eval(a.alpha, a.beta, {a.z, a.zi}, a.tol);
  std::cout << "value=" << format_float(v.value.real());
  if (a.zi != 0.0) std::cout << " value_im=" << format_float(v.value.imag());
  std::cout << " branch=" << to_string(v.branch)
            << " est_error=" << format_float(v.est_error) << "\n";
  return 0;
}

struct FodeArgs {
  ProblemParams params{1.5, 0.6, 2.0, 1.0, 1.0};
  double w0 = 1.0, w1 = 0.0, horizon = 50.0, threshold = 0.0;
  int steps = 256;
  std::string out;
};

int run_fode(const FodeArgs& a) {
  ScalarIvp ivp{a.params, a.w0, a.w1};
  VolterraOptions opts;
  opts.threshold = a.threshold;
  auto out = detect_blowup(ivp, a.horizon, a.steps, opts);
  std::cout << "status=" << to_string(out.status);
  if (out.t_star) std::cout << " t_star=" << format_float(*out.t_star);
  std::cout << "\n";
  for (const auto& e : out.refinement_history) {
    std::cout << "refinement steps=" << e.steps << " t_cross=";
    if (e.t_cross >= 0.0)
      std::cout << format_float(e.t_cross);
    else
      std::cout << "none";
    std::cout << "\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, trajectory_csv(out, a.params));
    if (log_debug()) std::cerr << "wrote " << a.out << "\n";
  }
  return 0;
}

struct PdeArgs {
  ProblemParams params{1.5, 0.6, 2.0, 1.0, 1.0};
  int modes = 128, dim = 1, steps = 256;
  double horizon = 2.0;
  std::vector<std::string> u0_specs, u1_specs;
  std::string snap_times;
  std::string out_prefix;
};

int run_pde(const PdeArgs& a) {
  SpectralDomain dom(a.dim, a.modes);
  std::vector<double> c0(dom.num_modes(), 0.0), c1(dom.num_modes(), 0.0);
  for (auto& [k, amp] : parse_modes(a.u0_specs, a.dim, a.modes)) c0[k] = amp;
  for (auto& [k, amp] : parse_modes(a.u1_specs, a.dim, a.modes)) c1[k] = amp;
  auto u0 = dom.make_field(std::move(c0));
  auto u1 = dom.make_field(std::move(c1));
  auto run = pde_detect_blowup(dom, u0, u1, a.params, a.horizon, a.steps);
  std::cout << "status=" << to_string(run.status);
  if (run.t_star) std::cout << " t_star=" << format_float(*run.t_star);
  std::cout << " final_sup=" << format_float(run.supnorm.back()) << "\n";

  if (!a.out_prefix.empty()) {
    std::vector<SnapshotRef> refs;
    if (!a.snap_times.empty()) {
      std::vector<double> times;
      std::stringstream ss(a.snap_times);
      std::string tok;
      while (std::getline(ss, tok, ',')) times.push_back(std::stod(tok));
      int idx = 0;
      for (double tv : times) {
        // nearest node at or below the requested time
        std::size_t j = 0;
        for (std::size_t i = 0; i < run.mesh->size(); ++i)
          if (run.mesh->node(i) <= tv) j = i;
        char name[64];
        std::snprintf(name, sizeof name, "_snap_%03d.csv", idx++);
        SnapshotRef ref{run.mesh->node(j), a.out_prefix + name};
        write_file(ref.file, snapshot_csv(dom, run.coeffs[j]));
        refs.push_back(std::move(ref));
      }
    }
    write_file(a.out_prefix + "_manifest.json",
               pde_manifest_json(a.params, run, a.modes, a.dim, refs));
  }
  return 0;
}

struct ProbeArgs {
  double alpha = 1.5, gamma = 0.6, t_lo = 10.0, t_hi = 1000.0;
  int modes = 32, mode = 1, points = 60;
};

int run_probe(const ProbeArgs& a) {
  SpectralDomain dom(1, a.modes);
  std::vector<double> c(dom.num_modes(), 0.0);
  if (a.mode < 1 || a.mode > a.modes) throw std::invalid_argument("mode out of range");
  c[a.mode - 1] = 1.0;
  auto probe = operator_decay_probe(dom, a.alpha, a.gamma, dom.make_field(std::move(c)),
                                    logspace(a.t_lo, a.t_hi, a.points));
  std::cout << "p_slope=" << format_float(probe.p_fit.slope)
            << " ip_slope=" << format_float(probe.ip_fit.slope)
            << " memory_slope=" << format_float(probe.memory_fit.slope) << "\n";
  return 0;
}

struct CalibrateArgs {
  ProblemParams params{1.5, 0.6, 2.0, 1.0, 1.0};
  double l = 0.0;
};

int run_calibrate(const CalibrateArgs& a) {
  auto c = calibrate_constants(a.params, a.l);
  json j;
  j["K1"] = c.K1;
  j["K2"] = c.K2;
  j["l"] = c.l;
  j["normalizer"] = c.normalizer;
  j["trace"] = c.trace;
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out;
  int threads = 0;
};

int run_sweep(const SweepArgs& a) {
  std::ifstream f(a.config);
  if (!f) throw std::invalid_argument("cannot open config: " + a.config);
  json j = json::parse(f);
  if (j.value("schema", 1) != 1) throw std::invalid_argument("unknown config schema");
  SweepGrid grid;
  const std::string solver = j.value("solver", "scalar");
  if (solver == "pde")
    grid.solver = CaseConfig::Solver::pde;
  else if (solver != "scalar")
    throw std::invalid_argument("solver must be 'scalar' or 'pde'");
  grid.alphas = j.at("alphas").get<std::vector<double>>();
  grid.gammas = j.at("gammas").get<std::vector<double>>();
  grid.ps = j.at("ps").get<std::vector<double>>();
  grid.scales = j.value("scales", std::vector<double>{1.0});
  grid.a = j.value("a", 1.0);
  grid.b = j.value("b", 1.0);
  grid.w1 = j.value("w1", 0.0);
  grid.horizon = j.value("horizon", 60.0);
  grid.base_steps = j.value("base_steps", 160);
  grid.threads = j.value("threads", 2);
  grid.modes = j.value("modes", 32);
  grid.dimension = j.value("dimension", 1);
  if (a.threads > 0) grid.threads = a.threads;

  auto rows = sweep(grid);
  int blow = 0, glob = 0, other = 0;
  for (const auto& r : rows) {
    if (r.observed == "blowup")
      ++blow;
    else if (r.observed == "global-to-horizon")
      ++glob;
    else
      ++other;
  }
  write_file(a.out, phase_table_csv(rows));
  std::cout << "cells=" << rows.size() << " blowup=" << blow << " global=" << glob
            << " unconfirmed=" << other << " out=" << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracwave: numerical laboratory for a fractional diffusion-wave "
               "equation with a nonlinear memory term"};
  app.require_subcommand(1);

  MlfArgs mlf_args;
  auto* c_mlf = app.add_subcommand("mlf", "evaluate the two-parameter kernel function");
  c_mlf->add_option("--alpha", mlf_args.alpha, "first parameter, 0 < alpha <= 2")->required();
  c_mlf->add_option("--beta", mlf_args.beta, "second parameter")->required();
  c_mlf->add_option("--z", mlf_args.z, "argument (real part)")->required();
  c_mlf->add_option("--zi", mlf_args.zi, "argument (imaginary part)");
  c_mlf->add_option("--tol", mlf_args.tol, "relative tolerance");

  FodeArgs fode_args;
  auto* c_fode = app.add_subcommand("fode", "scalar memory equation with blow-up detection");
  c_fode->add_option("--alpha", fode_args.params.alpha)->required();
  c_fode->add_option("--gamma", fode_args.params.gamma)->required();
  c_fode->add_option("--p", fode_args.params.p)->required();
  c_fode->add_option("--a", fode_args.params.a);
  c_fode->add_option("--b", fode_args.params.b);
  c_fode->add_option("--w0", fode_args.w0)->required();
  c_fode->add_option("--w1", fode_args.w1);
  c_fode->add_option("--horizon", fode_args.horizon)->required();
  c_fode->add_option("--steps", fode_args.steps, "base refinement step count");
  c_fode->add_option("--threshold", fode_args.threshold, "blow-up threshold (0 = auto)");
  c_fode->add_option("--out", fode_args.out, "trajectory CSV path");

  PdeArgs pde_args;
  auto* c_pde = app.add_subcommand("pde", "spectral solver on (0,pi)^d");
  c_pde->add_option("--alpha", pde_args.params.alpha)->required();
  c_pde->add_option("--gamma", pde_args.params.gamma)->required();
  c_pde->add_option("--p", pde_args.params.p)->required();
  c_pde->add_option("--b", pde_args.params.b);
  c_pde->add_option("--modes", pde_args.modes, "modes per axis");
  c_pde->add_option("--dim", pde_args.dim, "1 or 2");
  c_pde->add_option("--horizon", pde_args.horizon)->required();
  c_pde->add_option("--steps", pde_args.steps, "base refinement step count");
  c_pde->add_option("--u0", pde_args.u0_specs, "initial mode k:amp (2D: kx:ky:amp)");
  c_pde->add_option("--u1", pde_args.u1_specs, "initial slope mode k:amp");
  c_pde->add_option("--snap", pde_args.snap_times, "comma-separated snapshot times");
  c_pde->add_option("--out-prefix", pde_args.out_prefix, "output prefix for CSV/JSON");

  ProbeArgs probe_args;
  auto* c_probe = app.add_subcommand("probe", "operator decay exponents");
  c_probe->add_option("--alpha", probe_args.alpha)->required();
  c_probe->add_option("--gamma", probe_args.gamma)->required();
  c_probe->add_option("--modes", probe_args.modes);
  c_probe->add_option("--mode", probe_args.mode, "probe input mode (1-based)");
  c_probe->add_option("--t-lo", probe_args.t_lo);
  c_probe->add_option("--t-hi", probe_args.t_hi);
  c_probe->add_option("--points", probe_args.points);

  CalibrateArgs cal_args;
  auto* c_cal = app.add_subcommand("calibrate", "explicit a-priori constants");
  c_cal->add_option("--alpha", cal_args.params.alpha)->required();
  c_cal->add_option("--gamma", cal_args.params.gamma)->required();
  c_cal->add_option("--p", cal_args.params.p)->required();
  c_cal->add_option("--a", cal_args.params.a);
  c_cal->add_option("--b", cal_args.params.b);
  c_cal->add_option("--l", cal_args.l, "test exponent (0 = auto)");

  SweepArgs sweep_args;
  auto* c_sweep = app.add_subcommand("sweep", "phase-diagram sweep from a JSON config");
  c_sweep->add_option("--config", sweep_args.config)->required();
  c_sweep->add_option("--out", sweep_args.out)->required();
  c_sweep->add_option("--threads", sweep_args.threads, "parallelism cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    std::cerr << app.help();
    return 1;
  }

  try {
    if (c_mlf->parsed()) return run_mlf(mlf_args);
    if (c_fode->parsed()) return run_fode(fode_args);
    if (c_pde->parsed()) return run_pde(pde_args);
    if (c_probe->parsed()) return run_probe(probe_args);
    if (c_cal->parsed()) return run_calibrate(cal_args);
    if (c_sweep->parsed()) return run_sweep(sweep_args);
    emit_error("usage", "no subcommand selected");
    return 1;
  } catch (const std::invalid_argument& e) {
    emit_error("validation", e.what());
    return 1;
  } catch (const IndeterminateRefinement& e) {
    emit_error("indeterminate-refinement", e.what());
    return 2;
  } catch (const StepFailure& e) {
    emit_error("step-failure", e.what());
    return 2;
  } catch (const MlOverflowError& e) {
    emit_error("overflow", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("numerical", e.what());
    return 2;
  }
}
