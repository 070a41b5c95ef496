#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddw/sweep.hpp"
#include "ddw/types.hpp"

// Three-state model of a singlet-doublet crossing. The basis is
// {doublet partner decoupled from the singlet, doublet partner sharing the
// singlet's parity, singlet}; all quasienergies are measured as plain reals
// (no zone refolding inside the model).

namespace ddw::three_state {

struct ThreeStateParams {
  double doublet_quasienergy = 0.0;  ///< quasienergy of the decoupled partner
  double splitting = 0.0;            ///< Delta: doublet quasienergy splitting
  double detuning = 0.0;             ///< delta: singlet minus coupled partner
  double coupling = 0.0;             ///< b: matrix element of the crossing

  void validate() const;
  /// Soft checks of the regime Delta <~ b << Omega.
  std::vector<std::string> warnings(double frequency) const;
};

/// Half-angle of atan2(2b, delta), in (0, pi/2).
double mixing_angle(double coupling, double detuning);

struct Levels {
  double spectator = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

Levels quasienergies(const ThreeStateParams& p);

/// Mean energies of the dressed states as convex mixtures of the
/// undressed coupled partner and singlet.
Levels mean_energies(const ThreeStateParams& p, double spectator_mean,
                     double partner_mean, double singlet_mean);

struct Probabilities {
  double right = 0.0;
  double left = 0.0;
  double top = 0.0;
};

/// Closed-form occupations of the right, left and singlet states for a
/// particle starting in the right well.
Probabilities tunnel_probabilities(const ThreeStateParams& p, double t);

Eigen::Matrix3d hamiltonian(const ThreeStateParams& p);

/// (1, 1, 0)/sqrt(2): the right-well state in the model basis.
Eigen::Vector3cd right_state();

/// Exact evolution under hamiltonian(p).
Eigen::Vector3cd evolve(const ThreeStateParams& p, double t,
                        const Eigen::Vector3cd& initial);

/// Occupations of the right, left and singlet states.
Probabilities project(const Eigen::Vector3cd& state);

struct FitOptions {
  double window_fraction = 0.25;  ///< far-field window on each sweep side
};

struct LinearModel {
  double intercept = 0.0;
  double slope = 0.0;
  double operator()(double x) const { return intercept + slope * x; }
};

struct CrossingFit {
  ThreeStateParams params;  ///< model evaluated at the center
  double center = 0.0;
  double gap_min = 0.0;
  int center_index = 0;  ///< grid point with the smallest gap

  /// State indices at grid point 0.
  int spectator_state = -1;
  int partner_state = -1;
  int singlet_state = -1;
  std::vector<int> spectator_path, partner_path, singlet_path;

  /// Per grid point: adiabatic gap and mean energies of the pair ordered
  /// by quasienergy.
  std::vector<double> gaps;
  std::vector<double> lower_mean_energy;
  std::vector<double> upper_mean_energy;
  std::vector<double> spectator_mean_energy;

  LinearModel detuning;
  LinearModel splitting;
  LinearModel doublet_quasienergy;

  ThreeStateParams at(double axis_value) const;
};

/// Locates the single same-parity singlet-doublet avoided crossing in a
/// sweep and extracts the model parameters.
CrossingFit fit_crossing(const floquet::SweepResult& sweep, const FitOptions& options = {});

}  // namespace ddw::three_state
