#include "ddw/three_state.hpp"

#include <cmath>

namespace ddw::three_state {

void ThreeStateParams::validate() const {
  if (!(splitting > 0.0)) throw ArgumentError("three-state model: need splitting > 0");
  if (!(coupling > 0.0)) throw ArgumentError("three-state model: need coupling b > 0");
}

std::vector<std::string> ThreeStateParams::warnings(double frequency) const {
  std::vector<std::string> out;
  if (splitting > 3.0 * coupling) out.push_back("splitting well above the coupling b");
  if (coupling > 0.1 * frequency) out.push_back("coupling b not small against Omega");
  return out;
}

double mixing_angle(double coupling, double detuning) {
  if (!(coupling > 0.0)) throw ArgumentError("mixing_angle: need b > 0");
  return 0.5 * std::atan2(2.0 * coupling, detuning);
}

Levels quasienergies(const ThreeStateParams& p) {
  const double root = std::hypot(p.detuning, 2.0 * p.coupling);
  const double mid = p.doublet_quasienergy + p.splitting + 0.5 * p.detuning;
  return {p.doublet_quasienergy, mid - 0.5 * root, mid + 0.5 * root};
}

Levels mean_energies(const ThreeStateParams& p, double spectator_mean,
                     double partner_mean, double singlet_mean) {
  const double beta = mixing_angle(p.coupling, p.detuning);
  const double c2 = std::cos(beta) * std::cos(beta);
  const double s2 = std::sin(beta) * std::sin(beta);
  return {spectator_mean, partner_mean * c2 + singlet_mean * s2,
          partner_mean * s2 + singlet_mean * c2};
}

Probabilities tunnel_probabilities(const ThreeStateParams& p, double t) {
  const Levels e = quasienergies(p);
  const double beta = mixing_angle(p.coupling, p.detuning);
  const double c2 = std::cos(beta) * std::cos(beta);
  const double s2 = std::sin(beta) * std::sin(beta);
  const double direct =
      std::cos((e.lower - e.spectator) * t) * c2 + std::cos((e.upper - e.spectator) * t) * s2;
  const double beat = (std::cos((e.lower - e.upper) * t) - 1.0) * c2 * s2;
  Probabilities out;
  out.right = 0.5 * (1.0 + direct + beat);
  out.left = 0.5 * (1.0 - direct + beat);
  out.top = -beat;
  return out;
}

Eigen::Matrix3d hamiltonian(const ThreeStateParams& p) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(1, 1) = p.splitting;
  h(1, 2) = p.coupling;
  h(2, 1) = p.coupling;
  h(2, 2) = p.splitting + p.detuning;
  h += p.doublet_quasienergy * Eigen::Matrix3d::Identity();
  return h;
}

Eigen::Vector3cd right_state() {
  return Eigen::Vector3cd(1.0, 1.0, 0.0) / std::sqrt(2.0);
}

Eigen::Vector3cd evolve(const ThreeStateParams& p, double t,
                        const Eigen::Vector3cd& initial) {
  if (std::abs(initial.norm() - 1.0) > 1e-12) {
    throw ArgumentError("evolve: initial state is not normalized");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(hamiltonian(p));
  const Eigen::Matrix3cd v = es.eigenvectors().cast<Complex>();
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  return v * phases.asDiagonal() * (v.adjoint() * initial);
}

Probabilities project(const Eigen::Vector3cd& state) {
  const Complex r = (state(0) + state(1)) / std::sqrt(2.0);
  const Complex l = (state(0) - state(1)) / std::sqrt(2.0);
  return {std::norm(r), std::norm(l), std::norm(state(2))};
}

}  // namespace ddw::three_state
