#include "ddw/model.hpp"

#include <cmath>
#include <string>

namespace ddw::model {

namespace {

void require_dim(int dim, int minimum, const char* what) {
  if (dim < minimum) {
    throw DimensionError(std::string(what) + ": dimension " +
                         std::to_string(dim) + " below minimum " +
                         std::to_string(minimum));
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(barrier > 0.0)) throw ArgumentError("barrier height D must be > 0");
  if (!(drive >= 0.0)) throw ArgumentError("driving strength F must be >= 0");
  if (!(frequency > 0.0)) throw ArgumentError("driving frequency must be > 0");
  if (basis_size < 8) throw DimensionError("basis size N must be >= 8");
  if (!(basis_scale > 0.0)) throw ArgumentError("basis scale must be > 0");
}

RealMatrix position_operator(int dim, double scale) {
  require_dim(dim, 2, "position_operator");
  RealMatrix x = RealMatrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double element = scale * std::sqrt(0.5 * (n + 1));
    x(n, n + 1) = element;
    x(n + 1, n) = element;
  }
  return x;
}

RealMatrix kinetic_operator(int dim, double scale) {
  require_dim(dim, 2, "kinetic_operator");
  // p^2 = (2n + 1 - a^2 - a^dag^2) / (2 sigma^2)
  const double factor = 0.5 / (scale * scale);
  RealMatrix t = RealMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    t(n, n) = 0.5 * factor * (2 * n + 1);
    if (n + 2 < dim) {
      const double off = -0.5 * factor * std::sqrt(double(n + 1) * (n + 2));
      t(n, n + 2) = off;
      t(n + 2, n) = off;
    }
  }
  return t;
}

RealMatrix static_hamiltonian(const ModelParams& params) {
  params.validate();
  const int n = params.basis_size;
  const RealMatrix x = position_operator(n, params.basis_scale);
  const RealMatrix x2 = x * x;
  const RealMatrix x4 = x2 * x2;
  RealMatrix h = kinetic_operator(n, params.basis_scale) - 0.25 * x2 +
                 x4 / (64.0 * params.barrier);
  // Products of symmetric matrices are symmetric only up to rounding.
  return 0.5 * (h + h.transpose());
}

double drive_amplitude(const ModelParams& params) {
  return params.drive * std::sqrt(8.0 * params.barrier);
}

RealMatrix hamiltonian_at(const ModelParams& params, double t) {
  return DrivenDoubleWell(params).at(t);
}

RealVector parity_diagonal(int dim) {
  require_dim(dim, 1, "parity_operator");
  RealVector p(dim);
  for (int n = 0; n < dim; ++n) p(n) = (n % 2 == 0) ? 1.0 : -1.0;
  return p;
}

RealMatrix parity_operator(int dim) {
  return parity_diagonal(dim).asDiagonal();
}

double potential(double x, double barrier) {
  const double x2 = x * x;
  return -0.25 * x2 + x2 * x2 / (64.0 * barrier);
}

double well_position(double barrier) { return std::sqrt(8.0 * barrier); }

DrivenDoubleWell::DrivenDoubleWell(const ModelParams& params)
    : params_(params),
      position_(position_operator(params.basis_size, params.basis_scale)),
      static_(static_hamiltonian(params)),
      parity_(parity_diagonal(params.basis_size)),
      amplitude_(drive_amplitude(params)) {}

RealMatrix DrivenDoubleWell::at(double t) const {
  const double c = amplitude_ * std::cos(params_.frequency * t);
  return static_ + c * position_;
}

}  // namespace ddw::model
