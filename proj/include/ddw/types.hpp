#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ddw {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Thrown when a numerical routine fails or drifts outside its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class LabelError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, int dimension)
      : Error(what), dimension_(dimension) {}
  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// Reduces an energy into the zone [-omega/2, omega/2).
inline double fold_quasienergy(double energy, double omega) {
  double folded = energy - omega * std::floor((energy + 0.5 * omega) / omega);
  if (folded >= 0.5 * omega) folded -= omega;
  if (folded < -0.5 * omega) folded += omega;
  return folded;
}

}  // namespace ddw
