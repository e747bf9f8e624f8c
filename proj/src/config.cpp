#include "dynwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dynwave/dirichlet.hpp"
#include "dynwave/errors.hpp"

namespace dynwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(x))
    throw ConfigError("value '" + value + "' for key '" + key + "' is not a finite number",
                      line);
  return x;
}

int parse_int(const std::string& key, const std::string& value, int line) {
  const double x = parse_double(key, value, line);
  if (x != std::floor(x) || std::fabs(x) > 1e9)
    throw ConfigError("value '" + value + "' for key '" + key + "' is not an integer", line);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("value '" + value + "' for key '" + key + "' is not a boolean", line);
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value,
                    int line_no) {
  if (key == "command") {
    cfg.command = value;
  } else if (key == "preset") {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), value) == names.end())
      throw ConfigError("unknown preset '" + value + "'", line_no);
    cfg.preset = value;
  } else if (key == "N") {
    const int n = parse_int(key, value, line_no);
    if (n < 4) throw ConfigError("N must be at least 4 (got " + value + ")", line_no);
    cfg.n_cells = n;
  } else if (key == "T") {
    const double t = parse_double(key, value, line_no);
    if (!(t > 0.0)) throw ConfigError("T must be positive (got " + value + ")", line_no);
    cfg.T = t;
  } else if (key == "dt") {
    const double d = parse_double(key, value, line_no);
    if (d < 0.0) throw ConfigError("dt must be nonnegative (got " + value + ")", line_no);
    cfg.dt = d;
  } else if (key == "sample_stride") {
    const int s = parse_int(key, value, line_no);
    if (s < 1) throw ConfigError("sample_stride must be >= 1 (got " + value + ")", line_no);
    cfg.sample_stride = s;
  } else if (key == "lp_exponent") {
    const double p = parse_double(key, value, line_no);
    if (!(p >= 1.0)) throw ConfigError("lp_exponent must be >= 1 (got " + value + ")", line_no);
    cfg.lp_exponent = p;
  } else if (key == "coupling") {
    if (value != "trace" && value != "acoustic" && value != "normal_derivative")
      throw ConfigError("coupling must be 'trace' or 'acoustic' (got '" + value + "')",
                        line_no);
    cfg.coupling = value;
  } else if (key == "q_const") {
    cfg.q_const = parse_double(key, value, line_no);
  } else if (key == "r_const") {
    cfg.r_const = parse_double(key, value, line_no);
  } else if (key == "alpha0") {
    cfg.alpha0 = parse_double(key, value, line_no);
  } else if (key == "alpha1") {
    cfg.alpha1 = parse_double(key, value, line_no);
  } else if (key == "beta0") {
    cfg.beta0 = parse_double(key, value, line_no);
  } else if (key == "beta1") {
    cfg.beta1 = parse_double(key, value, line_no);
  } else if (key == "damp_c0") {
    cfg.damp_c0 = parse_double(key, value, line_no);
  } else if (key == "damp_c1") {
    cfg.damp_c1 = parse_double(key, value, line_no);
  } else if (key == "damp_ct0") {
    cfg.damp_ct0 = parse_double(key, value, line_no);
  } else if (key == "damp_ct1") {
    cfg.damp_ct1 = parse_double(key, value, line_no);
  } else if (key == "ac_p0") {
    cfg.ac_p0 = parse_double(key, value, line_no);
  } else if (key == "ac_p1") {
    cfg.ac_p1 = parse_double(key, value, line_no);
  } else if (key == "ac_q0") {
    cfg.ac_q0 = parse_double(key, value, line_no);
  } else if (key == "ac_q1") {
    cfg.ac_q1 = parse_double(key, value, line_no);
  } else if (key == "ac_r0") {
    cfg.ac_r0 = parse_double(key, value, line_no);
  } else if (key == "ac_r1") {
    cfg.ac_r1 = parse_double(key, value, line_no);
  } else if (key == "f_init") {
    cfg.f_init = value;
  } else if (key == "g_init") {
    cfg.g_init = value;
  } else if (key == "h0") {
    cfg.h0 = parse_double(key, value, line_no);
  } else if (key == "h1") {
    cfg.h1 = parse_double(key, value, line_no);
  } else if (key == "j0") {
    cfg.j0 = parse_double(key, value, line_no);
  } else if (key == "j1") {
    cfg.j1 = parse_double(key, value, line_no);
  } else if (key == "boundary_from_data") {
    cfg.boundary_from_data = parse_bool(key, value, line_no);
  } else if (key == "lambda_min") {
    cfg.lambda_min = parse_double(key, value, line_no);
  } else if (key == "lambda_max") {
    cfg.lambda_max = parse_double(key, value, line_no);
  } else if (key == "decay_lambdas") {
    cfg.decay_lambdas = value;
  } else if (key == "seed") {
    const double s = parse_double(key, value, line_no);
    if (s < 0.0 || s != std::floor(s) || s > 4294967295.0)
      throw ConfigError("seed must be an unsigned 32-bit integer (got " + value + ")",
                        line_no);
    cfg.seed = static_cast<unsigned>(s);
  } else if (key == "n_directions") {
    const int n = parse_int(key, value, line_no);
    if (n < 8) throw ConfigError("n_directions must be >= 8 (got " + value + ")", line_no);
    cfg.n_directions = n;
  } else if (key == "output") {
    if (value.empty()) throw ConfigError("output path must not be empty", line_no);
    cfg.output = value;
  } else {
    throw ConfigError("unknown key '" + key + "'", line_no);
  }
}

void finalize_config(RunConfig& cfg) {
  static const char* commands[] = {"simulate", "spectrum", "charroots", "decay", "verify"};
  bool known = false;
  for (const char* c : commands) known = known || cfg.command == c;
  if (!known) throw ConfigError("unknown command '" + cfg.command + "'");

  const double h = 1.0 / cfg.n_cells;
  if (cfg.dt > 0.5 * h + 1e-12)
    throw ConfigError("dt = " + std::to_string(cfg.dt) +
                      " exceeds the stability bound 0.5/N = " + std::to_string(0.5 * h));
  if (!(cfg.lambda_min < cfg.lambda_max) || !(cfg.lambda_max <= 0.0))
    throw ConfigError("need lambda_min < lambda_max <= 0");
  if (cfg.command == "decay") parse_lambda_list(cfg.decay_lambdas);
}

RunConfig parse_config(const std::string& text) {
  struct RawEntry {
    std::string key, value;
    int line;
  };
  std::vector<RawEntry> entries;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key=value, got '" + line + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    entries.push_back({key, value, line_no});
  }

  // First pass validates each line and discovers the preset.
  RunConfig probe;
  for (const auto& e : entries) apply_override(probe, e.key, e.value, e.line);

  // Start from the preset bundle (if any), then let every explicit key win.
  RunConfig cfg = probe.preset.empty() ? RunConfig{} : preset_base_config(probe.preset);
  for (const auto& e : entries) apply_override(cfg, e.key, e.value, e.line);
  finalize_config(cfg);
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"prop73_3",  "prop73_2", "prop71_decay", "charroots_match",
          "blockformula", "acoustic1d", "miyadera", "factorization"};
}

RunConfig preset_base_config(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "prop73_3") {
    cfg.n_cells = 200;
    cfg.T = 4.2;
    cfg.f_init = "sine:3,sine:5:0.5";
    cfg.g_init = "sine:2:0.3";
    cfg.sample_stride = 20; // samples every 0.05 at the default dt
  } else if (name == "prop73_2") {
    cfg.n_cells = 200;
    cfg.T = 50.0;
    cfg.alpha0 = 1.0;
    cfg.alpha1 = -1.0;
    cfg.beta0 = -1.0;
    cfg.beta1 = -1.0;
    cfg.f_init = "eigmix:0.05";
    cfg.g_init = "zero";
    cfg.boundary_from_data = true;
    cfg.sample_stride = 10;
  } else if (name == "prop71_decay") {
    cfg.n_cells = 200;
    cfg.lp_exponent = 2.0;
    cfg.decay_lambdas = "1e2,1e3,1e4,1e5,1e6";
  } else if (name == "charroots_match") {
    cfg.n_cells = 200;
    cfg.alpha0 = 1.0;
    cfg.alpha1 = -1.0;
    cfg.beta0 = -1.0;
    cfg.beta1 = -1.0;
  } else if (name == "blockformula") {
    cfg.n_cells = 200;
    cfg.T = 5.0;
    cfg.h0 = 0.3;
    cfg.h1 = -0.2;
    cfg.j0 = 0.2;
    cfg.j1 = 0.1;
    cfg.f_init = "lift,sine:1,sine:2:0.3";
    cfg.g_init = "liftj,sine:1:0.5";
    cfg.sample_stride = 20;
  } else if (name == "acoustic1d") {
    cfg.n_cells = 200;
    cfg.T = 50.0;
    cfg.coupling = "acoustic";
    cfg.ac_q0 = -4.0;
    cfg.ac_q1 = -4.0;
    cfg.ac_r0 = -1.0;
    cfg.ac_r1 = -1.0;
    cfg.f_init = "cos:1";
    cfg.g_init = "sine:2:0.2";
    cfg.j0 = 0.1;
    cfg.j1 = -0.1;
    cfg.sample_stride = 20;
  } else if (name == "miyadera") {
    cfg.n_cells = 3000;
  } else if (name == "factorization") {
    cfg.n_cells = 200;
    cfg.alpha0 = 1.0;
    cfg.alpha1 = -1.0;
    cfg.beta0 = -1.0;
    cfg.beta1 = -1.0;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

ProblemSpec build_problem_spec(const RunConfig& cfg, const Grid& grid) {
  ProblemSpec spec(grid);
  spec.coupling = cfg.coupling == "trace" ? Coupling::Trace : Coupling::NormalDerivative;
  spec.lp_exponent = cfg.lp_exponent;
  for (auto& v : spec.q_coef.values) v = cfg.q_const;
  for (auto& v : spec.r_coef.values) v = cfg.r_const;
  spec.alpha0 = cfg.alpha0;
  spec.alpha1 = cfg.alpha1;
  spec.beta0 = cfg.beta0;
  spec.beta1 = cfg.beta1;
  spec.damp_c0 = cfg.damp_c0;
  spec.damp_c1 = cfg.damp_c1;
  spec.damp_ct0 = cfg.damp_ct0;
  spec.damp_ct1 = cfg.damp_ct1;
  spec.ac_p0 = cfg.ac_p0;
  spec.ac_p1 = cfg.ac_p1;
  spec.ac_q0 = cfg.ac_q0;
  spec.ac_q1 = cfg.ac_q1;
  spec.ac_r0 = cfg.ac_r0;
  spec.ac_r1 = cfg.ac_r1;
  return spec;
}

GridFunction build_initial_data(const std::string& dsl, const RunConfig& cfg,
                                const Grid& grid) {
  GridFunction out = GridFunction::zero(grid);
  std::istringstream terms(dsl);
  std::string term;
  while (std::getline(terms, term, ',')) {
    term = trim(term);
    if (term.empty()) throw ConfigError("empty term in initial data '" + dsl + "'");

    std::vector<std::string> parts;
    std::istringstream ps(term);
    std::string p;
    while (std::getline(ps, p, ':')) parts.push_back(trim(p));
    const std::string& head = parts[0];

    auto amp_at = [&](std::size_t idx, double fallback) {
      if (parts.size() <= idx) return fallback;
      return parse_double("initial data amplitude", parts[idx], 0);
    };

    if (head == "zero") {
      // contributes nothing
    } else if (head == "sine" || head == "cos") {
      if (parts.size() < 2 || parts.size() > 3)
        throw ConfigError("term '" + term + "' needs the form " + head + ":k[:amp]");
      const int k = parse_int("mode index", parts[1], 0);
      if (k < 1) throw ConfigError("mode index must be >= 1 in '" + term + "'");
      const double amp = amp_at(2, 1.0);
      for (int i = 0; i <= grid.n_cells; ++i) {
        const double phase = k * M_PI * grid.node(i);
        out.values[i] += amp * (head == "sine" ? std::sin(phase) : std::cos(phase));
      }
    } else if (head == "bump") {
      if (parts.size() > 2) throw ConfigError("term '" + term + "' needs the form bump[:amp]");
      const double amp = amp_at(1, 1.0);
      for (int i = 0; i <= grid.n_cells; ++i) {
        const double x = grid.node(i);
        const double w = 4.0 * x * (1.0 - x);
        out.values[i] += (w > 0.0) ? amp * std::exp(1.0 - 1.0 / w) : 0.0;
      }
    } else if (head == "lift" || head == "liftj") {
      if (parts.size() != 1) throw ConfigError("term '" + term + "' takes no parameters");
      const BoundaryPair y = head == "lift" ? BoundaryPair{cfg.h0, cfg.h1}
                                            : BoundaryPair{cfg.j0, cfg.j1};
      const GridFunction lift = dirichlet_closed_form(0.0, y, grid).profile;
      for (int i = 0; i <= grid.n_cells; ++i) out.values[i] += lift.values[i];
    } else if (head == "eigmix") {
      if (parts.size() > 2) throw ConfigError("term '" + term + "' needs the form eigmix[:amp2]");
      if (cfg.coupling != "trace")
        throw ConfigError("eigmix initial data requires the trace coupling");
      const double amp2 = amp_at(1, 0.5);
      const ProblemSpec spec = build_problem_spec(cfg, grid);
      const auto pairs = slowest_real_modes(assemble(spec, grid), 2);
      if (pairs.size() < 2)
        throw ConfigError("eigmix: fewer than two real eigenpairs available");
      for (int which = 0; which < 2; ++which) {
        GridFunction mode = GridFunction::zero(grid);
        for (int i = 0; i <= grid.n_cells; ++i)
          mode.values[i] = pairs[static_cast<std::size_t>(which)].second[static_cast<std::size_t>(i)];
        const double nrm = lp_norm(mode, 2.0);
        if (nrm <= 0.0) throw ConfigError("eigmix: degenerate eigenvector");
        const double scale = (which == 0 ? 1.0 : amp2) / nrm;
        for (int i = 0; i <= grid.n_cells; ++i) out.values[i] += scale * mode.values[i];
      }
    } else {
      throw ConfigError("unknown initial data term '" + term + "'");
    }
  }
  return out;
}

std::vector<double> parse_lambda_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const double x = parse_double("decay_lambdas", item, 0);
    if (!(x > 0.0)) throw ConfigError("decay_lambdas entries must be positive");
    out.push_back(x);
  }
  if (out.size() < 3) throw ConfigError("decay_lambdas needs at least 3 values");
  return out;
}

std::pair<BoundaryPair, BoundaryPair> resolve_boundary_data(
    const RunConfig& cfg, const GridFunction& f, const GridFunction& g) {
  BoundaryPair h{cfg.h0, cfg.h1};
  BoundaryPair j{cfg.j0, cfg.j1};
  if (cfg.boundary_from_data) {
    if (cfg.coupling == "trace") {
      h = {f.at0(), f.at1()};
      j = {g.at0(), g.at1()};
    } else {
      // Acoustic flux unknowns carry (-u'(0), u'(1)); j stays explicit since
      // the flux velocity is unconstrained by the field data.
      h = {-one_sided_derivative(f, Side::Left), one_sided_derivative(f, Side::Right)};
    }
  }
  return {h, j};
}

} // namespace dynwave
