#pragma once

#include <string>

#include "dynwave/config.hpp"
#include "dynwave/report.hpp"

namespace dynwave {

/// Execute the experiment pipeline named by cfg.preset, honoring the
/// overridable knobs in cfg (grid size, horizon, seed, window bounds) where
/// the pipeline has such a knob. Returns scalars, a rectangular series from
/// which every verdict can be recomputed, and the verdicts themselves.
ExperimentResult run_preset(const RunConfig& cfg);

/// Run a preset from its base parameter bundle.
ExperimentResult run_preset(const std::string& name);

} // namespace dynwave
