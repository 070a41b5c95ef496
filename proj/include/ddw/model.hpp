#pragma once

#include "ddw/types.hpp"

// Operators of the harmonically driven quartic double well
//
//   H(t) = p^2/2 - x^2/4 + x^4/(64 D) + S x cos(Omega t),   S = F sqrt(8 D),
//
// in natural units hbar = m = omega_0 = 1, represented in a truncated
// harmonic-oscillator basis |n>, n = 0..N-1, of length scale sigma.

namespace ddw::model {

struct ModelParams {
  double barrier = 2.0;      ///< D, barrier height in units of hbar omega_0
  double drive = 1e-3;       ///< F, dimensionless driving strength
  double frequency = 1.5;    ///< Omega in units of omega_0
  int basis_size = 64;       ///< N
  double basis_scale = 1.0;  ///< sigma

  void validate() const;
  double period() const { return 2.0 * kPi / frequency; }

  bool operator==(const ModelParams&) const = default;
};

/// Tridiagonal x with x_{n,n+1} = sigma sqrt((n+1)/2).
RealMatrix position_operator(int dim, double scale = 1.0);

/// p^2/2, truncated from the infinite-basis operator (pentadiagonal).
RealMatrix kinetic_operator(int dim, double scale = 1.0);

/// H_DW with x^4 built as the square of the truncated x^2.
RealMatrix static_hamiltonian(const ModelParams& params);

/// S = F sqrt(8 D), the coefficient of x cos(Omega t).
double drive_amplitude(const ModelParams& params);

RealMatrix hamiltonian_at(const ModelParams& params, double t);

/// Diagonal entries (-1)^n.
RealVector parity_diagonal(int dim);
RealMatrix parity_operator(int dim);

/// Classical potential -x^2/4 + x^4/(64 D).
double potential(double x, double barrier);

/// Position x_0 = sqrt(8 D) of the two potential minima.
double well_position(double barrier);

/// Operators cached for repeated evaluation of H(t).
class DrivenDoubleWell {
 public:
  explicit DrivenDoubleWell(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  const RealMatrix& position() const { return position_; }
  const RealMatrix& static_part() const { return static_; }
  const RealVector& parity() const { return parity_; }
  double amplitude() const { return amplitude_; }
  int dim() const { return params_.basis_size; }

  RealMatrix at(double t) const;

 private:
  ModelParams params_;
  RealMatrix position_;
  RealMatrix static_;
  RealVector parity_;
  double amplitude_;
};

}  // namespace ddw::model
