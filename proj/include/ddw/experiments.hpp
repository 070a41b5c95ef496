#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ddw/config.hpp"
#include "ddw/dissipation.hpp"
#include "ddw/observables.hpp"
#include "ddw/three_state.hpp"

namespace ddw::experiments {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header strings of the four experiment tables.
std::vector<std::string> header_for(config::Experiment e);

/// Worker count: explicit value, then FLOQUET_THREADS, then all units.
int resolve_threads(int requested);

/// Sweep over the configured grid and fit of its crossing.
three_state::CrossingFit locate_crossing(const config::RunConfig& config,
                                         floquet::SweepResult* sweep_out = nullptr);

/// Model parameters of a single-point run, moved to the crossing center
/// when at_crossing is set.
model::ModelParams point_params(const config::RunConfig& config);

/// Coherence trace of the master equation started in the right-well
/// state, integrated with RK4.
struct DynamicsRun {
  observables::LocalizedStates localized;
  double tunnel_period = 0.0;
  observables::CoherenceTrace trace;
  dissipation::Trajectory trajectory;
};

DynamicsRun run_dynamics(const floquet::FloquetSolution& solution,
                         const dissipation::BathParams& bath, double t_end, double dt,
                         int stride);

/// 1/t_coh and asymptotic S2 at one parameter point.
struct DecoherencePoint {
  double rate = 0.0;
  long long cycles = 0;
  bool saturated = false;
  double tunnel_period = 0.0;
  double s2_asymptotic = 0.0;
  std::vector<std::string> warnings;
};

DecoherencePoint decoherence_point(const floquet::FloquetSolution& solution,
                                   const dissipation::BathParams& bath);

/// Coefficients of the localized states truncated to the retained states.
ComplexVector retain(const ComplexVector& coefficients, int n_states);

Table spectrum_table(const config::RunConfig& config);
Table dynamics_table(const config::RunConfig& config);
Table decoherence_table(const config::RunConfig& config);
Table asymptotic_table(const config::RunConfig& config);
Table make_table(const config::RunConfig& config);

/// Writes the metadata block, header and rows to `path` through a
/// temporary file renamed into place.
void write_csv(const std::string& path, const Table& table, const config::RunConfig& config);

/// Runs the configured experiment; returns the process exit status and
/// reports failures on `err`.
int run(const config::RunConfig& config, std::ostream& err);

}  // namespace ddw::experiments
