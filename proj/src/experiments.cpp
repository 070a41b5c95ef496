#include "ddw/experiments.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ddw/parallel.hpp"

#ifndef DDW_VERSION
#define DDW_VERSION "unknown"
#endif

namespace ddw::experiments {

using config::Experiment;
using config::RunConfig;

std::vector<std::string> header_for(Experiment e) {
  switch (e) {
    case Experiment::spectrum:
      return {"axis_value", "state", "quasienergy", "mean_energy", "parity"};
    case Experiment::dynamics:
      return {"t", "p_return", "p_left", "p_top", "s2"};
    case Experiment::decoherence:
      return {"axis_value", "temperature", "inverse_coherence_time", "s2_asymptotic", "cycles",
              "saturated"};
    case Experiment::asymptotic:
      return {"temperature", "state", "mean_energy", "population", "s2_asymptotic"};
  }
  return {};
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FLOQUET_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return default_thread_count();
}

three_state::CrossingFit locate_crossing(const RunConfig& config, floquet::SweepResult* sweep_out) {
  auto result = floquet::sweep(config.model, config.sweep_axis, config.sweep_grid(), config.floquet,
                               resolve_threads(config.threads));
  auto fit = three_state::fit_crossing(result);
  if (sweep_out) *sweep_out = std::move(result);
  return fit;
}

model::ModelParams point_params(const RunConfig& config) {
  if (!config.at_crossing) return config.model;
  return floquet::with_axis(config.model, config.sweep_axis, locate_crossing(config).center);
}

ComplexVector retain(const ComplexVector& coefficients, int n_states) {
  for (Eigen::Index i = n_states; i < coefficients.size(); ++i) {
    if (coefficients(i) != Complex(0.0)) {
      throw ArgumentError("localized states reach beyond the retained Floquet states");
    }
  }
  return coefficients.head(n_states);
}

namespace {

double reference_period(const floquet::FloquetSolution& solution,
                        const observables::StateLabels& labels) {
  const auto& q = solution.quasienergies;
  const double omega = solution.params.frequency;
  const int other = labels.singlet >= 0 ? labels.singlet : labels.spectator;
  const double w = std::abs(fold_quasienergy(q(other) - q(labels.partner), omega));
  if (!(w > 0.0)) throw NumericalError("degenerate tunnel frequency", w);
  return 2.0 * kPi / w;
}

}  // namespace

DynamicsRun run_dynamics(const floquet::FloquetSolution& solution,
                         const dissipation::BathParams& bath, double t_end, double dt,
                         int stride) {
  DynamicsRun run;
  const auto kernel = dissipation::build_kernel(solution, bath);
  run.localized = observables::localized_states(solution);
  run.tunnel_period = reference_period(solution, run.localized.labels);
  const int n = bath.n_states;
  const ComplexVector right = retain(run.localized.right_coefficients, n);
  const ComplexVector left = retain(run.localized.left_coefficients, n);
  const ComplexVector top = retain(run.localized.top_coefficients, n);
  const ComplexMatrix rho0 = right * right.adjoint();
  run.trajectory = dissipation::integrate_master_equation(kernel, rho0, t_end, dt, stride);
  for (std::size_t i = 0; i < run.trajectory.times.size(); ++i) {
    observables::record(run.trace, run.trajectory.times[i], run.trajectory.states[i], right, left,
                        top);
  }
  return run;
}

DecoherencePoint decoherence_point(const floquet::FloquetSolution& solution,
                                   const dissipation::BathParams& bath) {
  DecoherencePoint out;
  const auto kernel = dissipation::build_kernel(solution, bath);
  const auto loc = observables::localized_states(solution);
  if (loc.labels.singlet < 0) throw LabelError("decoherence_point: no singlet identified");
  out.tunnel_period = reference_period(solution, loc.labels);
  const ComplexVector right = retain(loc.right_coefficients, bath.n_states);
  const dissipation::SpectralPropagator prop(kernel.generator());
  const ComplexVector amps = prop.amplitudes(right * right.adjoint());
  auto s2_at = [&](double t) {
    const ComplexMatrix rho = prop.evolve_amplitudes(amps, t);
    return observables::renyi_entropy(0.5 * (rho + rho.adjoint()), 2.0);
  };
  const auto est = observables::decoherence_time(s2_at, out.tunnel_period);
  out.rate = est.rate;
  out.cycles = est.cycles;
  out.saturated = est.saturated;
  out.warnings = est.warnings;
  out.s2_asymptotic =
      observables::renyi_entropy(dissipation::asymptotic_state(kernel).rho, 2.0);
  return out;
}

Table spectrum_table(const RunConfig& config) {
  const auto grid = config.sweep_grid();
  const auto result = floquet::sweep(config.model, config.sweep_axis, grid, config.floquet,
                                     resolve_threads(config.threads));
  Table t{header_for(Experiment::spectrum), {}};
  const int n = config.bath.n_states;
  std::vector<std::vector<int>> paths;
  for (int id = 0; id < n; ++id) paths.push_back(result.track(id));
  for (int i = 0; i < result.size(); ++i) {
    const auto& p = result.points[i];
    for (int id = 0; id < n; ++id) {
      const int s = paths[id][i];
      t.rows.push_back({grid[i], static_cast<double>(id), p.quasienergies(s), p.mean_energies(s),
                        static_cast<double>(p.parity[s])});
    }
  }
  return t;
}

Table dynamics_table(const RunConfig& config) {
  const auto params = point_params(config);
  const auto solution = floquet::floquet_states(params, config.floquet);
  double t_end = config.t_end;
  if (t_end == 0.0) {
    const auto labels = observables::identify_states(solution);
    t_end = config.tunnel_cycles * reference_period(solution, labels);
  }
  const auto run = run_dynamics(solution, config.bath, t_end, config.dt, config.output_stride);
  Table t{header_for(Experiment::dynamics), {}};
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    t.rows.push_back({run.trace.times[i], run.trace.p_return[i], run.trace.p_left[i],
                      run.trace.p_top[i], run.trace.s2[i]});
  }
  return t;
}

Table decoherence_table(const RunConfig& config) {
  const auto grid = config.sweep_grid();
  const int temps = static_cast<int>(config.temperatures.size());
  std::vector<std::vector<DecoherencePoint>> results(grid.size());
  parallel_for(static_cast<int>(grid.size()), resolve_threads(config.threads), [&](int i) {
    const auto params = floquet::with_axis(config.model, config.sweep_axis, grid[i]);
    const auto solution = floquet::floquet_states(params, config.floquet);
    for (int k = 0; k < temps; ++k) {
      auto bath = config.bath;
      bath.temperature = config.temperatures[k];
      results[i].push_back(decoherence_point(solution, bath));
    }
  });
  Table t{header_for(Experiment::decoherence), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int k = 0; k < temps; ++k) {
      const auto& r = results[i][k];
      t.rows.push_back({grid[i], config.temperatures[k], r.rate, r.s2_asymptotic,
                        static_cast<double>(r.cycles), r.saturated ? 1.0 : 0.0});
    }
  }
  return t;
}

Table asymptotic_table(const RunConfig& config) {
  const auto params = point_params(config);
  const auto solution = floquet::floquet_states(params, config.floquet);
  Table t{header_for(Experiment::asymptotic), {}};
  for (double temperature : config.temperatures) {
    auto bath = config.bath;
    bath.temperature = temperature;
    const auto state = dissipation::asymptotic_state(dissipation::build_kernel(solution, bath));
    const double s2 = observables::renyi_entropy(state.rho, 2.0);
    for (int a = 0; a < bath.n_states; ++a) {
      t.rows.push_back({temperature, static_cast<double>(a), solution.mean_energies(a),
                        state.rho(a, a).real(), s2});
    }
  }
  return t;
}

Table make_table(const RunConfig& config) {
  switch (config.experiment) {
    case Experiment::spectrum: return spectrum_table(config);
    case Experiment::dynamics: return dynamics_table(config);
    case Experiment::decoherence: return decoherence_table(config);
    case Experiment::asymptotic: return asymptotic_table(config);
  }
  throw ArgumentError("unknown experiment");
}

void write_csv(const std::string& path, const Table& table, const RunConfig& config) {
  const std::string tmp = path + ".tmp";
  try {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    out << "# ddw " << DDW_VERSION << '\n';
    std::istringstream cfg(config::serialize(config));
    for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      out << (i ? "," : "") << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      if (row.size() != table.header.size()) throw Error("write_csv: row width differs from header");
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << config::format_double(row[i]);
      }
      out << '\n';
    }
    out.close();
    if (!out) throw Error("write to '" + tmp + "' failed");
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    config.validate();
    write_csv(config.output, make_table(config), config);
    return 0;
  } catch (const std::exception& e) {
    err << "ddw: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ddw::experiments
