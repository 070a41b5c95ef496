#pragma once

#include <vector>

#include "ddw/model.hpp"
#include "ddw/types.hpp"

namespace ddw::floquet {

struct Options {
  int steps_per_period = 512;  ///< midpoint exponential steps per period
  int time_samples = 256;      ///< M, stored mode samples per period
  int harmonics = 32;          ///< K, Fourier components |k| <= K

  void validate() const;
  bool operator==(const Options&) const = default;
};

/// exp(-i h dt) for a real symmetric h, exact via its eigendecomposition.
ComplexMatrix step_propagator(const RealMatrix& h, double dt);

/// Time-ordered U(t1, t0) as a product of midpoint step propagators.
ComplexMatrix propagate(const model::ModelParams& params, double t0, double t1,
                        int steps);

/// Floquet states of one driving period.
///
/// States are ordered by ascending mean energy. Mode samples are stored
/// side by side: block j (columns j*N .. j*N+N-1) holds |phi_a(t_j)> in
/// column a, with t_j = j T / M. Fourier components use the same layout,
/// block k+K holding |phi_{a,k}>.
struct FloquetSolution {
  model::ModelParams params;
  Options options;
  RealVector quasienergies;
  RealVector mean_energies;  ///< harmonic sum, or the time average where K is too small
  std::vector<int> parity;  ///< +1/-1, 0 when unresolved
  ComplexMatrix samples;
  ComplexMatrix fourier;
  int fourier_harmonics = 0;
  RealVector fourier_weight;  ///< sum_k <phi_{a,k}|phi_{a,k}>
  ComplexMatrix half_period;  ///< U(T/2, 0)
  double unitarity_defect = 0.0;
  double orthonormality_defect = 0.0;

  int dim() const { return static_cast<int>(quasienergies.size()); }
  int sample_count() const { return options.time_samples; }
  double period() const { return params.period(); }
  double sample_time(int j) const { return j * period() / sample_count(); }

  auto mode(int j) const { return samples.middleCols(j * dim(), dim()); }
  auto initial_modes() const { return mode(0); }
  auto harmonic(int k) const {
    return fourier.middleCols((k + fourier_harmonics) * dim(), dim());
  }
  /// <phi_{a,k}|phi_{a,k}> for |k| <= K.
  RealVector harmonic_weights(int a) const;

  ComplexMatrix one_period() const;
  /// G = P U(T/2, 0), a square root of U(T, 0).
  ComplexMatrix generalized_parity_operator() const;
};

/// Full pipeline: propagator, eigenstates, modes, Fourier components,
/// parity and mean energies.
FloquetSolution floquet_states(const model::ModelParams& params,
                               const Options& options = {});

/// Recomputes the Fourier components for |k| <= harmonics.
void fourier_components(FloquetSolution& solution, int harmonics);

/// sum_k (eps_a + k Omega) <phi_{a,k}|phi_{a,k}>.
double mean_energy(const FloquetSolution& solution, int state);

/// (1/M) sum_j <phi_a(t_j)|H(t_j)|phi_a(t_j)> for all states.
RealVector time_averaged_energies(const FloquetSolution& solution);

/// Fourier weight deficit below which the harmonic sum is used for the
/// mean energy; beyond it the state's harmonics exceed K.
inline constexpr double kFourierCompleteness = 1e-6;

/// <phi(0)|G|phi(0)> e^{i eps T/2}; equal to +1 or -1 for a Floquet state.
Complex parity_candidate(const ComplexMatrix& generalized_parity,
                         const ComplexVector& initial_mode, double quasienergy,
                         double period);

void classify_parity(FloquetSolution& solution);

inline constexpr double kParityTolerance = 1e-6;

}  // namespace ddw::floquet
