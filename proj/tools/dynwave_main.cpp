#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dynwave/config.hpp"
#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"
#include "dynwave/evolve.hpp"
#include "dynwave/grid.hpp"
#include "dynwave/presets.hpp"
#include "dynwave/report.hpp"
#include "dynwave/spectral.hpp"

namespace {

using namespace dynwave;

// Every config key a flag can set; --command is excluded on purpose (the
// subcommand is the command) and flags override config-file lines by being
// appended after them, so the ordinary last-one-wins rule applies.
const char* const kConfigKeys[] = {
    "preset",    "N",        "T",       "dt",       "sample_stride",
    "lp_exponent", "coupling", "q_const", "r_const",  "alpha0",
    "alpha1",    "beta0",    "beta1",   "damp_c0",  "damp_c1",
    "damp_ct0",  "damp_ct1", "ac_p0",   "ac_p1",    "ac_q0",
    "ac_q1",     "ac_r0",    "ac_r1",   "f_init",   "g_init",
    "h0",        "h1",       "j0",      "j1",       "boundary_from_data",
    "lambda_min", "lambda_max", "decay_lambdas", "seed", "n_directions",
    "output",
};

struct CliInput {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides; // in flag order
};

void add_common_options(CLI::App* cmd, CliInput& in) {
  cmd->add_option("--config", in.config_path, "key=value config file");
  for (const char* key : kConfigKeys) {
    cmd->add_option_function<std::string>(
        std::string("--") + key,
        [&in, key](const std::string& value) { in.overrides.emplace_back(key, value); },
        std::string("config key ") + key);
  }
}

// Config text assembled from the file, the subcommand, and the flags. Flag
// lines get line numbers past the end of the file, and config errors cite
// those numbers.
std::string assemble_config_text(const CliInput& in, const std::string& command,
                                 const std::string& forced_preset) {
  std::string text;
  if (!in.config_path.empty()) {
    std::ifstream file(in.config_path);
    if (!file) throw ConfigError("cannot open config file '" + in.config_path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    text = buf.str();
    if (!text.empty() && text.back() != '\n') text += '\n';
  }
  text += "command=" + command + "\n";
  if (!forced_preset.empty()) text += "preset=" + forced_preset + "\n";
  for (const auto& kv : in.overrides) text += kv.first + "=" + kv.second + "\n";
  return text;
}

int cmd_simulate(const RunConfig& cfg) {
  Grid grid(cfg.n_cells);
  ProblemSpec spec = build_problem_spec(cfg, grid);
  GridFunction f = build_initial_data(cfg.f_init, cfg, grid);
  GridFunction g = build_initial_data(cfg.g_init, cfg, grid);
  auto [h, j] = resolve_boundary_data(cfg, f, g);
  Trajectory traj = simulate(spec, grid, f, g, h, j, cfg.T, cfg.dt, cfg.sample_stride);

  ExperimentResult res;
  res.columns = {"t", "energy", "l2_norm", "trace0", "trace1"};
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const PhaseState& st = traj.states[k];
    res.row({traj.times[k], traj.energies[k], lp_norm(st.u, 2.0), st.x.at0, st.x.at1});
  }
  res.scalar("samples", static_cast<double>(traj.states.size()));
  res.scalar("final_energy", traj.energies.back());
  res.scalar("final_l2_norm", lp_norm(traj.states.back().u, 2.0));
  emit_csv(res, cfg.output, cfg);
  std::printf("simulate: N=%d T=%g samples=%zu -> %s\n", cfg.n_cells, cfg.T,
              traj.states.size(), cfg.output.c_str());
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  Grid grid(cfg.n_cells);
  ProblemSpec spec = build_problem_spec(cfg, grid);
  SpectralReport rep = spectral_equivalence_check(spec, grid, cfg.lambda_min, cfg.lambda_max);

  // kind 0: every eigenvalue (re, im); kind 1: matched eigenvalue with its
  // characteristic residual; kind 2: root with its distance to the spectrum.
  ExperimentResult res;
  res.columns = {"kind", "re", "im", "value"};
  for (const auto& ev : rep.eigenvalues) res.row({0.0, ev.real(), ev.imag(), 0.0});
  for (std::size_t i = 0; i < rep.matched_eigenvalues.size(); ++i)
    res.row({1.0, rep.matched_eigenvalues[i], 0.0, rep.match_residuals[i]});
  for (std::size_t i = 0; i < rep.roots.size(); ++i)
    res.row({2.0, rep.roots[i], 0.0, rep.root_to_eig_distance[i]});

  double res_max = 0.0, dist_max = 0.0;
  for (double r : rep.match_residuals) res_max = std::max(res_max, r);
  for (double d : rep.root_to_eig_distance) dist_max = std::max(dist_max, d);
  res.scalar("matched_count", static_cast<double>(rep.matched_eigenvalues.size()));
  res.scalar("root_count", static_cast<double>(rep.roots.size()));
  res.scalar("char_residual_max", res_max);
  res.scalar("root_to_eig_max", dist_max);
  res.scalar("gamma_periodic", rep.gamma_periodic.value_or(0.0));
  emit_csv(res, cfg.output, cfg);
  std::printf("spectrum: N=%d window [%g, %g] eigenvalues=%zu matched=%zu roots=%zu -> %s\n",
              cfg.n_cells, cfg.lambda_min, cfg.lambda_max, rep.eigenvalues.size(),
              rep.matched_eigenvalues.size(), rep.roots.size(), cfg.output.c_str());
  return 0;
}

int cmd_charroots(const RunConfig& cfg) {
  const std::vector<double> roots =
      char_roots(cfg.beta0, cfg.beta1, cfg.lambda_min, cfg.lambda_max);
  ExperimentResult res;
  res.columns = {"lambda", "char_value"};
  for (double r : roots) res.row({r, char_eval(r, cfg.beta0, cfg.beta1)});
  res.scalar("root_count", static_cast<double>(roots.size()));
  emit_csv(res, cfg.output, cfg);
  std::printf("charroots: beta=(%g, %g) window [%g, %g] roots=%zu -> %s\n", cfg.beta0,
              cfg.beta1, cfg.lambda_min, cfg.lambda_max, roots.size(), cfg.output.c_str());
  for (double r : roots) std::printf("  lambda = %.12g\n", r);
  return 0;
}

int cmd_decay(const RunConfig& cfg) {
  Grid grid(cfg.n_cells);
  const std::vector<double> lambdas = parse_lambda_list(cfg.decay_lambdas);
  ExperimentResult res;
  res.columns = {"lambda", "norm"};
  for (double lam : lambdas)
    res.row({lam, dirichlet_norm(lam, cfg.lp_exponent, grid, cfg.n_directions, cfg.seed)});
  const double slope =
      decay_exponent_fit(cfg.lp_exponent, lambdas, grid, cfg.n_directions, cfg.seed);
  res.scalar("decay_slope", slope);
  res.scalar("decay_reference", -1.0 / (2.0 * cfg.lp_exponent));
  emit_csv(res, cfg.output, cfg);
  std::printf("decay: p=%g slope=%.6g (reference %.6g) -> %s\n", cfg.lp_exponent, slope,
              -1.0 / (2.0 * cfg.lp_exponent), cfg.output.c_str());
  return 0;
}

// dynwave_out.csv + prop73_3 -> dynwave_out_prop73_3.csv
std::string with_preset_stem(const std::string& path, const std::string& name) {
  const std::size_t dot = path.rfind('.');
  const std::size_t slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "_" + name;
  return path.substr(0, dot) + "_" + name + path.substr(dot);
}

int cmd_verify(const CliInput& in, const RunConfig& cfg) {
  const std::vector<std::string> names =
      cfg.preset.empty() ? preset_names() : std::vector<std::string>{cfg.preset};
  int failed = 0;
  for (const auto& name : names) {
    // Re-resolve the config with this preset pinned so explicit flags and
    // file lines keep their usual precedence over the preset bundle.
    RunConfig pcfg = parse_config(assemble_config_text(in, "verify", name));
    ExperimentResult res = run_preset(pcfg);
    const std::string path =
        names.size() > 1 ? with_preset_stem(pcfg.output, name) : pcfg.output;
    emit_csv(res, path, pcfg);
    std::printf("== %s -> %s\n", name.c_str(), path.c_str());
    for (const auto& v : res.verdicts) {
      std::printf("  [%s] %s: measured %.6g vs tolerance %.6g\n",
                  v.pass ? "PASS" : "FAIL", v.name.c_str(), v.measured, v.tolerance);
      if (!v.pass) ++failed;
    }
  }
  if (failed > 0) {
    std::printf("verify: %d verdict(s) failed\n", failed);
    return 1;
  }
  std::printf("verify: all verdicts passed (%zu preset%s)\n", names.size(),
              names.size() == 1 ? "" : "s");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave equations with dynamical boundary conditions: simulation, "
               "spectra, and verification experiments"};
  app.require_subcommand(1);
  CliInput in;
  CLI::App* sub_simulate = app.add_subcommand("simulate", "integrate and record a trajectory");
  CLI::App* sub_spectrum = app.add_subcommand("spectrum", "eigenvalues vs characteristic roots");
  CLI::App* sub_charroots = app.add_subcommand("charroots", "roots of the characteristic equation");
  CLI::App* sub_decay = app.add_subcommand("decay", "Dirichlet-lift norm decay in lambda");
  CLI::App* sub_verify = app.add_subcommand("verify", "run experiment presets and check verdicts");
  for (CLI::App* sub : {sub_simulate, sub_spectrum, sub_charroots, sub_decay, sub_verify})
    add_common_options(sub, in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e); // prints help or the usage error
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "verify") {
      const RunConfig cfg = parse_config(assemble_config_text(in, command, ""));
      return cmd_verify(in, cfg);
    }
    const RunConfig cfg = parse_config(assemble_config_text(in, command, ""));
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "spectrum") return cmd_spectrum(cfg);
    if (command == "charroots") return cmd_charroots(cfg);
    if (command == "decay") return cmd_decay(cfg);
    std::fprintf(stderr, "error: unknown command '%s'\n", command.c_str());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const BlowUpError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const SingularityError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
