#pragma once

#include <vector>

#include "ddw/floquet.hpp"

namespace ddw::floquet {

enum class SweepAxis { frequency, drive };

model::ModelParams with_axis(model::ModelParams params, SweepAxis axis, double value);

/// The spectral part of a FloquetSolution kept per sweep point: everything
/// but the time samples and Fourier components.
struct SpectrumPoint {
  double value = 0.0;
  model::ModelParams params;
  RealVector quasienergies;
  RealVector mean_energies;
  std::vector<int> parity;
  ComplexMatrix initial_modes;

  int dim() const { return static_cast<int>(quasienergies.size()); }
};

SpectrumPoint summarize(const FloquetSolution& solution, double value);

struct SweepResult {
  SweepAxis axis = SweepAxis::frequency;
  std::vector<double> grid;
  std::vector<SpectrumPoint> points;
  /// lineage[i][a]: index at point i+1 of the state with index a at point i.
  std::vector<std::vector<int>> lineage;
  /// best_overlap[i][a]: |<phi_a^(i)(0)|phi_lineage(a)^(i+1)(0)>|.
  std::vector<std::vector<double>> best_overlap;

  int size() const { return static_cast<int>(points.size()); }
  /// Indices along the sweep of the state that has index `state` at point 0.
  std::vector<int> track(int state) const;
  /// True where the matched overlap of the step i -> i+1 fell below 0.5.
  bool flagged(int step, int state) const { return best_overlap[step][state] < 0.5; }
};

/// Maximum-overlap assignment between two orthonormal sets of states:
/// greedy row maxima when they already form a permutation, otherwise a
/// global assignment maximizing the summed overlap.
std::vector<int> match_states(const ComplexMatrix& before, const ComplexMatrix& after,
                              std::vector<double>* overlaps = nullptr);

/// Floquet spectrum over a monotone grid of the driving frequency or
/// strength. Grid points are solved concurrently on `threads` workers
/// (0 = all available); matching runs in grid order.
SweepResult sweep(const model::ModelParams& base, SweepAxis axis,
                  const std::vector<double>& values, const Options& options = {},
                  int threads = 0);

}  // namespace ddw::floquet
