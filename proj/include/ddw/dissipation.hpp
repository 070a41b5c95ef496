#pragma once

#include <vector>

#include "ddw/floquet.hpp"
#include "ddw/types.hpp"

// Floquet-Markov master equation for an ohmic bath coupled through x.
//
// Density matrices live in the basis of the n lowest-mean-energy Floquet
// states (the first n of a FloquetSolution). Vectorization is row-major:
// rho(a, b) sits at index a * n + b.

namespace ddw::dissipation {

struct BathParams {
  double gamma = 1e-6;        ///< ohmic coupling strength
  double temperature = 1e-4;  ///< k_B T
  int n_states = 10;          ///< retained Floquet states
  int harmonics = 32;         ///< Fourier cutoff of the position elements

  /// gamma = 0 is accepted as the coherent limit.
  void validate(int basis_dim) const;
  bool operator==(const BathParams&) const = default;
};

/// X_{ab,k} for |k| <= K over the first `n` Floquet states.
struct PositionElements {
  int harmonics = 0;
  std::vector<ComplexMatrix> blocks;  ///< blocks[k + K]
  double symmetry_defect = 0.0;       ///< max |X_{ab,k} - conj(X_{ba,-k})| before enforcement

  int size() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows()); }
  const ComplexMatrix& at(int k) const { return blocks.at(k + harmonics); }
};

PositionElements position_fourier_elements(const floquet::FloquetSolution& solution,
                                           int n_states, int harmonics);

/// gamma e / (exp(e / kT) - 1), with its limits at e = 0 and T = 0.
double bath_coefficient(double energy, const BathParams& bath);

struct DissipativeKernel {
  int n = 0;
  double frequency = 0.0;
  RealVector quasienergies;
  ComplexMatrix tensor;  ///< L_{ab,cd} at (a*n+b, c*n+d), without the coherent part
  double trace_defect = 0.0;

  int index(int a, int b) const { return a * n + b; }
  Complex at(int a, int b, int c, int d) const { return tensor(index(a, b), index(c, d)); }
  /// Full generator: dissipative tensor plus -i (eps_a - eps_b) on the diagonal.
  ComplexMatrix generator() const;
};

DissipativeKernel build_kernel(const PositionElements& x, const RealVector& quasienergies,
                               double frequency, const BathParams& bath);

/// Convenience: X elements and kernel from a solution.
DissipativeKernel build_kernel(const floquet::FloquetSolution& solution, const BathParams& bath);

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, int n);

/// Throws ArgumentError unless rho is square of size n, Hermitian within
/// 1e-9 and of unit trace within 1e-9.
void check_density_matrix(const ComplexMatrix& rho, int n);

double min_eigenvalue(const ComplexMatrix& rho);

/// Largest dt accepted by the integrator for this generator.
double max_step(const ComplexMatrix& generator);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  double trace_drift_rate = 0.0;  ///< max |tr rho - 1| / t over samples
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;  ///< most negative eigenvalue seen (positivity monitor)
};

/// Classic RK4 with steps of at most dt, sampling every `stride` steps and
/// at t_end. Requires dt * ||G||_inf < 0.1.
Trajectory integrate_master_equation(const DissipativeKernel& kernel, const ComplexMatrix& rho0,
                                     double t_end, double dt, int stride = 1);

/// exp(G t) through the eigendecomposition of the generator; used for
/// windows far beyond the reach of explicit stepping.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexMatrix& generator);

  ComplexMatrix evolve(const ComplexMatrix& rho0, double t) const;
  /// Precomputes the modal amplitudes of rho0 for repeated evaluation.
  ComplexVector amplitudes(const ComplexMatrix& rho0) const;
  ComplexMatrix evolve_amplitudes(const ComplexVector& amplitudes, double t) const;

  const ComplexVector& eigenvalues() const { return values_; }
  double reconstruction_defect() const { return defect_; }

 private:
  int n_ = 0;
  ComplexVector values_;
  ComplexMatrix vectors_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  double defect_ = 0.0;
};

struct AsymptoticState {
  ComplexMatrix rho;
  double null_singular_value = 0.0;
  double next_singular_value = 0.0;
  double crosscheck_distance = -1.0;  ///< max-entry distance to long-time propagation, -1 if skipped
  double min_eigenvalue = 0.0;
};

inline constexpr double kNullTolerance = 1e-13;  ///< relative to the largest singular value

/// Null vector of the generator by SVD, normalized and Hermitized.
AsymptoticState asymptotic_state(const DissipativeKernel& kernel, bool crosscheck = true);

/// R(a, c) = L_{aa,cc}: rate of c -> a, zero diagonal.
RealMatrix golden_rule_rates(const DissipativeKernel& kernel);

}  // namespace ddw::dissipation
