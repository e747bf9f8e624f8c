#include "dynwave/report.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "dynwave/errors.hpp"

namespace dynwave {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["preset"] = c.preset;
  j["N"] = c.n_cells;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["sample_stride"] = c.sample_stride;
  j["lp_exponent"] = c.lp_exponent;
  j["coupling"] = c.coupling;
  j["q_const"] = c.q_const;
  j["r_const"] = c.r_const;
  j["alpha0"] = c.alpha0;
  j["alpha1"] = c.alpha1;
  j["beta0"] = c.beta0;
  j["beta1"] = c.beta1;
  j["damp_c0"] = c.damp_c0;
  j["damp_c1"] = c.damp_c1;
  j["damp_ct0"] = c.damp_ct0;
  j["damp_ct1"] = c.damp_ct1;
  j["ac_p0"] = c.ac_p0;
  j["ac_p1"] = c.ac_p1;
  j["ac_q0"] = c.ac_q0;
  j["ac_q1"] = c.ac_q1;
  j["ac_r0"] = c.ac_r0;
  j["ac_r1"] = c.ac_r1;
  j["f_init"] = c.f_init;
  j["g_init"] = c.g_init;
  j["h0"] = c.h0;
  j["h1"] = c.h1;
  j["j0"] = c.j0;
  j["j1"] = c.j1;
  j["boundary_from_data"] = c.boundary_from_data;
  j["lambda_min"] = c.lambda_min;
  j["lambda_max"] = c.lambda_max;
  j["decay_lambdas"] = c.decay_lambdas;
  j["seed"] = c.seed;
  j["n_directions"] = c.n_directions;
  j["output"] = c.output;
  return j;
}

} // namespace

void ExperimentResult::row(std::initializer_list<double> values) {
  if (!columns.empty() && values.size() != columns.size())
    throw ArgumentError("series row width does not match the declared columns");
  rows.emplace_back(values);
}

bool ExperimentResult::all_passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void append_trajectory_rows(ExperimentResult& result, const Trajectory& traj, double run_id) {
  const std::vector<std::string> want{"run", "t", "energy", "l2_norm", "trace0", "trace1"};
  if (result.columns.empty()) result.columns = want;
  if (result.columns != want)
    throw ArgumentError("trajectory rows need the standard trajectory columns");

  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const PhaseState& s = traj.states[i];
    result.rows.push_back({run_id, traj.times[i], traj.energies[i], lp_norm(s.u, 2.0),
                           s.x.at0, s.x.at1});
  }
}

void emit_csv(const ExperimentResult& result, const std::string& path, const RunConfig& cfg) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw Error("cannot open '" + path + "' for writing");

  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    if (c) csv << ',';
    csv << result.columns[c];
  }
  csv << '\n';
  for (const auto& row : result.rows) {
    if (row.size() != result.columns.size())
      throw ArgumentError("series row width does not match the declared columns");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) csv << ',';
      csv << fmt17(row[c]);
    }
    csv << '\n';
  }
  csv.flush();
  if (!csv) throw Error("failed while writing '" + path + "'");

  nlohmann::ordered_json meta;
  meta["config"] = config_json(cfg);
  nlohmann::ordered_json scalars = nlohmann::ordered_json::object();
  for (const auto& [name, value] : result.scalars) scalars[name] = value;
  meta["scalars"] = scalars;
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const auto& v : result.verdicts) {
    nlohmann::ordered_json item;
    item["name"] = v.name;
    item["pass"] = v.pass;
    item["measured"] = v.measured;
    item["tolerance"] = v.tolerance;
    verdicts.push_back(item);
  }
  meta["verdicts"] = verdicts;

  const std::string meta_path = path + ".meta.json";
  std::ofstream mj(meta_path, std::ios::binary);
  if (!mj) throw Error("cannot open '" + meta_path + "' for writing");
  mj << meta.dump(2) << '\n';
  mj.flush();
  if (!mj) throw Error("failed while writing '" + meta_path + "'");
}

} // namespace dynwave
