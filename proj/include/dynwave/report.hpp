#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynwave/config.hpp"
#include "dynwave/evolve.hpp"

namespace dynwave {

/// One named pass/fail check with the measured value and the bound it was
/// held against (for interval checks the name spells out the band).
struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

/// Output of one experiment: named scalars, a rectangular series table, and
/// the verdicts. Everything a verdict uses is recomputable from the series.
struct ExperimentResult {
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Verdict> verdicts;

  void scalar(const std::string& name, double value) { scalars.emplace_back(name, value); }
  void verdict(const std::string& name, bool pass, double measured, double tolerance) {
    verdicts.push_back({name, pass, measured, tolerance});
  }
  void row(std::initializer_list<double> values);
  bool all_passed() const;
};

/// Append (run, t, energy, l2_norm, trace0, trace1) rows for every sample.
/// Sets the columns on first use; later appends must agree.
void append_trajectory_rows(ExperimentResult& result, const Trajectory& traj, double run_id);

/// Write the series as CSV (header row, values with 17 significant digits)
/// and a sidecar <path>.meta.json holding the resolved config, the scalars,
/// and the verdicts. Identical results serialize byte-identically.
void emit_csv(const ExperimentResult& result, const std::string& path, const RunConfig& cfg);

} // namespace dynwave
