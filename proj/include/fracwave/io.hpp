#ifndef FRACWAVE_IO_HPP
#define FRACWAVE_IO_HPP

#include <string>
#include <vector>

#include "fracwave/blowup_lab.hpp"

namespace fracwave {

// Reproducible text output: floats at 17 significant digits, RFC 4180
// quoting, stable field order. Identical inputs give byte-identical files.

std::string format_float(double v);
std::string csv_quote(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

// rows (t, w, 0I^gamma(|w|^p)) over the trajectory mesh
std::string trajectory_csv(const SolveOutcome& out, const ProblemParams& params);

std::string phase_table_csv(const std::vector<PhaseRow>& rows);

// rows (x, u) for a 1D snapshot, (x, y, u) in 2D
std::string snapshot_csv(const SpectralDomain& dom, const std::vector<double>& coeffs);

std::string report_json(const RegimeReport& rep);

struct SnapshotRef {
  double t = 0.0;
  std::string file;
};

std::string pde_manifest_json(const ProblemParams& params, const FieldSolveOutcome& run,
                              int modes, int dimension,
                              const std::vector<SnapshotRef>& snapshots);

}  // namespace fracwave

#endif
