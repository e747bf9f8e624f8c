#pragma once

#include <string>
#include <vector>

#include "dynwave/grid.hpp"
#include "dynwave/spectral.hpp"

namespace dynwave {

/// Everything one process invocation needs, resolved from defaults, an
/// optional preset bundle, a key=value config file, and command-line
/// overrides (applied in that order).
struct RunConfig {
  std::string command = "simulate";
  std::string preset; ///< empty = none

  int n_cells = 200;
  double T = 10.0;
  double dt = 0.0; ///< 0 selects the stability default 0.5 h
  int sample_stride = 1;
  double lp_exponent = 2.0;

  std::string coupling = "trace"; ///< trace | acoustic (alias normal_derivative)
  double q_const = 0.0, r_const = 0.0;
  double alpha0 = 0.0, alpha1 = 0.0, beta0 = 0.0, beta1 = 0.0;
  double damp_c0 = 0.0, damp_c1 = 0.0, damp_ct0 = 0.0, damp_ct1 = 0.0;
  double ac_p0 = 0.0, ac_p1 = 0.0, ac_q0 = 0.0, ac_q1 = 0.0, ac_r0 = 0.0, ac_r1 = 0.0;

  std::string f_init = "zero", g_init = "zero";
  double h0 = 0.0, h1 = 0.0, j0 = 0.0, j1 = 0.0;
  /// Take h (and j) from the built data instead of h0/h1: traces in trace
  /// mode, one-sided fluxes in acoustic mode. Needed for eigmix data.
  bool boundary_from_data = false;

  double lambda_min = -50.0, lambda_max = -0.05;
  std::string decay_lambdas = "1e2,1e3,1e4,1e5,1e6";

  unsigned seed = 0;
  int n_directions = 32;
  std::string output = "dynwave_out.csv";
};

/// Apply one key=value pair; throws ConfigError naming the line on bad keys
/// or out-of-range values.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value,
                    int line_no = 0);

/// Cross-field validation plus preset resolution already folded in by
/// parse_config; safe to call again after further overrides.
void finalize_config(RunConfig& cfg);

/// Parse a whole config text: '#' starts a comment, blank lines are skipped,
/// each other line must be key=value. A preset key merges the preset's base
/// values, with every explicitly written key taking precedence.
RunConfig parse_config(const std::string& text);

/// Known preset names, in a fixed order.
std::vector<std::string> preset_names();

/// The parameter bundle a preset starts from.
RunConfig preset_base_config(const std::string& name);

/// Instantiate the coupled-problem coefficients on a grid.
ProblemSpec build_problem_spec(const RunConfig& cfg, const Grid& grid);

/// Initial-data terms, comma separated:
///   zero | sine:k[:amp] | cos:k[:amp] | bump[:amp] | lift | liftj | eigmix[:amp2]
/// lift/liftj add the lambda=0 lift of (h0,h1)/(j0,j1); eigmix adds the two
/// slowest real eigenvectors of the assembled operator, phi1 + amp2 phi2.
GridFunction build_initial_data(const std::string& dsl, const RunConfig& cfg,
                                const Grid& grid);

/// Comma-separated positive reals (for decay_lambdas).
std::vector<double> parse_lambda_list(const std::string& csv);

/// Resolve the boundary data pair (h = boundary positions in trace mode /
/// boundary fluxes in acoustic mode, j = their velocities). With
/// boundary_from_data set, h and (in trace mode) j are read off the built
/// profiles so that the compatibility checks in init_state hold by
/// construction; otherwise the explicit h0/h1/j0/j1 keys are used.
std::pair<BoundaryPair, BoundaryPair> resolve_boundary_data(
    const RunConfig& cfg, const GridFunction& f, const GridFunction& g);

} // namespace dynwave
