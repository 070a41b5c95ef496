#include "ddw/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ddw::floquet {

void Options::validate() const {
  if (steps_per_period < 2 || steps_per_period % 2 != 0) {
    throw ArgumentError("steps per period must be a positive even number");
  }
  if (time_samples < 2 || time_samples % 2 != 0) {
    throw ArgumentError("time samples per period must be a positive even number");
  }
  if (steps_per_period % time_samples != 0) {
    throw ArgumentError("time samples must divide the steps per period");
  }
  if (harmonics < 0) throw ArgumentError("harmonic cutoff must be >= 0");
  if (time_samples < 2 * harmonics + 2) {
    throw ArgumentError("aliasing: need time samples M >= 2K + 2 (M = " +
                        std::to_string(time_samples) +
                        ", K = " + std::to_string(harmonics) + ")");
  }
}

ComplexMatrix step_propagator(const RealMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of H(t) failed", 0.0);
  }
  const RealMatrix& v = es.eigenvectors();
  const RealVector phase = -es.eigenvalues() * dt;
  const RealMatrix re = v * phase.array().cos().matrix().asDiagonal() * v.transpose();
  const RealMatrix im = v * phase.array().sin().matrix().asDiagonal() * v.transpose();
  ComplexMatrix u(h.rows(), h.cols());
  u.real() = re;
  u.imag() = im;
  return u;
}

ComplexMatrix propagate(const model::ModelParams& params, double t0, double t1,
                        int steps) {
  if (steps < 1) throw ArgumentError("propagate: steps must be >= 1");
  if (!(t1 > t0)) throw ArgumentError("propagate: need t1 > t0");
  const model::DrivenDoubleWell well(params);
  const double dt = (t1 - t0) / steps;
  ComplexMatrix u = ComplexMatrix::Identity(well.dim(), well.dim());
  for (int j = 0; j < steps; ++j) {
    u = step_propagator(well.at(t0 + (j + 0.5) * dt), dt) * u;
  }
  return u;
}

RealVector FloquetSolution::harmonic_weights(int a) const {
  RealVector w(2 * fourier_harmonics + 1);
  for (int k = -fourier_harmonics; k <= fourier_harmonics; ++k) {
    w(k + fourier_harmonics) = harmonic(k).col(a).squaredNorm();
  }
  return w;
}

ComplexMatrix FloquetSolution::one_period() const {
  const RealVector p = model::parity_diagonal(static_cast<int>(half_period.rows()));
  return p.asDiagonal() * half_period * p.asDiagonal() * half_period;
}

ComplexMatrix FloquetSolution::generalized_parity_operator() const {
  return model::parity_diagonal(static_cast<int>(half_period.rows())).asDiagonal() * half_period;
}

namespace {

double max_identity_defect(const ComplexMatrix& m) {
  const ComplexMatrix d =
      m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

// Eigenvectors of a unitary matrix. Columns belonging to (numerically)
// coincident eigenvalues are orthonormalized among themselves.
void orthonormalize_clusters(const ComplexVector& values, ComplexMatrix& vectors) {
  const int n = static_cast<int>(values.size());
  std::vector<bool> done(n, false);
  for (int a = 0; a < n; ++a) {
    if (done[a]) continue;
    std::vector<int> cluster{a};
    for (int b = a + 1; b < n; ++b) {
      if (!done[b] && std::abs(values(a) - values(b)) < 1e-8) cluster.push_back(b);
    }
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      ComplexVector v = vectors.col(cluster[i]);
      for (std::size_t j = 0; j < i; ++j) {
        const ComplexVector u = vectors.col(cluster[j]);
        v -= u * u.dot(v);
      }
      vectors.col(cluster[i]) = v.normalized();
      done[cluster[i]] = true;
    }
  }
}

// Largest-magnitude component made real and positive.
void fix_gauge(ComplexMatrix& vectors) {
  for (int a = 0; a < vectors.cols(); ++a) {
    Eigen::Index row = 0;
    vectors.col(a).cwiseAbs().maxCoeff(&row);
    const Complex c = vectors(row, a);
    vectors.col(a) *= std::conj(c) / std::abs(c);
    vectors(row, a) = std::abs(c);
  }
}

}  // namespace

void fourier_components(FloquetSolution& solution, int harmonics) {
  const int m = solution.sample_count();
  if (harmonics < 0) throw ArgumentError("harmonic cutoff must be >= 0");
  if (m < 2 * harmonics + 2) {
    throw ArgumentError("aliasing: need time samples M >= 2K + 2 (M = " +
                        std::to_string(m) + ", K = " + std::to_string(harmonics) +
                        ")");
  }
  const int n = solution.dim();
  const int nk = 2 * harmonics + 1;
  // phi_k = (1/M) sum_j phi(t_j) exp(2 pi i k j / M), as one matrix product.
  ComplexMatrix twiddle(m, nk);
  for (int j = 0; j < m; ++j) {
    for (int k = -harmonics; k <= harmonics; ++k) {
      const double angle = 2.0 * kPi * double((static_cast<long>(k) * j) % m) / m;
      twiddle(j, k + harmonics) = std::polar(1.0 / m, angle);
    }
  }
  Eigen::Map<const ComplexMatrix> stacked(solution.samples.data(),
                                          static_cast<Eigen::Index>(n) * n, m);
  solution.fourier.resize(n, static_cast<Eigen::Index>(n) * nk);
  Eigen::Map<ComplexMatrix> out(solution.fourier.data(),
                                static_cast<Eigen::Index>(n) * n, nk);
  out.noalias() = stacked * twiddle;
  solution.fourier_harmonics = harmonics;
}

double mean_energy(const FloquetSolution& solution, int state) {
  if (solution.fourier.size() == 0) {
    throw ArgumentError("mean_energy: Fourier components not computed");
  }
  const double omega = solution.params.frequency;
  const RealVector w = solution.harmonic_weights(state);
  double e = 0.0;
  for (int k = -solution.fourier_harmonics; k <= solution.fourier_harmonics; ++k) {
    e += (solution.quasienergies(state) + k * omega) * w(k + solution.fourier_harmonics);
  }
  return e;
}

RealVector time_averaged_energies(const FloquetSolution& solution) {
  const model::DrivenDoubleWell well(solution.params);
  const int n = solution.dim();
  const int m = solution.sample_count();
  RealVector e = RealVector::Zero(n);
  for (int j = 0; j < m; ++j) {
    const auto phi = solution.mode(j);
    const ComplexMatrix hphi = well.at(solution.sample_time(j)) * phi;
    for (int a = 0; a < n; ++a) e(a) += phi.col(a).dot(hphi.col(a)).real();
  }
  return e / m;
}

Complex parity_candidate(const ComplexMatrix& generalized_parity,
                         const ComplexVector& initial_mode, double quasienergy,
                         double period) {
  const Complex expectation = initial_mode.dot(generalized_parity * initial_mode);
  return expectation * std::polar(1.0, 0.5 * quasienergy * period);
}

void classify_parity(FloquetSolution& solution) {
  const ComplexMatrix g = solution.generalized_parity_operator();
  const int n = solution.dim();
  solution.parity.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    const Complex c = parity_candidate(g, solution.initial_modes().col(a),
                                       solution.quasienergies(a), solution.period());
    const double sign = c.real() >= 0.0 ? 1.0 : -1.0;
    if (std::abs(c - sign) < kParityTolerance) solution.parity[a] = int(sign);
  }
}

FloquetSolution floquet_states(const model::ModelParams& params,
                               const Options& options) {
  params.validate();
  options.validate();
  const model::DrivenDoubleWell well(params);
  const int n = well.dim();
  const int steps = options.steps_per_period;
  const int m = options.time_samples;
  const int stride = steps / m;
  const double period = params.period();
  const double dt = period / steps;
  const RealVector parity = well.parity();

  // U(t_j, 0) for the first half period. The second half follows from
  // H(t + T/2) = P H(t) P, i.e. U(t + T/2, 0) = P U(t, 0) P U(T/2, 0).
  std::vector<ComplexMatrix> propagators;
  propagators.reserve(m);
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  propagators.push_back(u);
  for (int j = 0; j < steps / 2; ++j) {
    u = step_propagator(well.at((j + 0.5) * dt), dt) * u;
    if ((j + 1) % stride == 0 && (j + 1) / stride < m / 2) propagators.push_back(u);
  }
  const ComplexMatrix half = u;
  for (int j = 0; j < m / 2; ++j) {
    propagators.push_back(parity.asDiagonal() * propagators[j] *
                          parity.asDiagonal() * half);
  }

  FloquetSolution sol;
  sol.params = params;
  sol.options = options;
  sol.half_period = half;
  sol.unitarity_defect = max_identity_defect(sol.one_period());

  // Eigenvectors of G = P U(T/2,0) diagonalize U(T,0) = G^2; G splits the
  // generalized parity sectors, so opposite-parity degeneracies of U are
  // resolved.
  Eigen::ComplexEigenSolver<ComplexMatrix> es(sol.generalized_parity_operator());
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the one-period propagator failed",
                         sol.unitarity_defect);
  }
  ComplexMatrix vectors = es.eigenvectors();
  for (int a = 0; a < n; ++a) vectors.col(a).normalize();
  orthonormalize_clusters(es.eigenvalues(), vectors);
  fix_gauge(vectors);
  sol.orthonormality_defect = max_identity_defect(vectors);
  if (sol.orthonormality_defect > 1e-8) {
    throw NumericalError("Floquet states not orthonormal (unitarity defect " +
                             std::to_string(sol.unitarity_defect) + ")",
                         sol.unitarity_defect);
  }

  RealVector eps(n);
  for (int a = 0; a < n; ++a) {
    const Complex mu = es.eigenvalues()(a);
    eps(a) = fold_quasienergy(-std::arg(mu * mu) / period, params.frequency);
  }

  // |phi_a(t_j)> = exp(i eps_a t_j) U(t_j, 0) |phi_a(0)>
  sol.quasienergies = eps;
  sol.samples.resize(n, static_cast<Eigen::Index>(n) * m);
  for (int j = 0; j < m; ++j) {
    const double t = j * period / m;
    ComplexVector phase(n);
    for (int a = 0; a < n; ++a) phase(a) = std::polar(1.0, eps(a) * t);
    sol.samples.middleCols(j * n, n).noalias() = propagators[j] * vectors;
    sol.samples.middleCols(j * n, n) *= phase.asDiagonal();
  }
  propagators.clear();

  fourier_components(sol, options.harmonics);
  classify_parity(sol);
  // States whose harmonics reach beyond K (high basis states) get the
  // period average of <H> instead of the truncated harmonic sum.
  const RealVector averaged = time_averaged_energies(sol);
  sol.mean_energies.resize(n);
  sol.fourier_weight.resize(n);
  for (int a = 0; a < n; ++a) {
    sol.fourier_weight(a) = sol.harmonic_weights(a).sum();
    sol.mean_energies(a) = std::abs(sol.fourier_weight(a) - 1.0) < kFourierCompleteness
                               ? mean_energy(sol, a)
                               : averaged(a);
  }

  // Order states by mean energy.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (sol.mean_energies(a) != sol.mean_energies(b)) {
      return sol.mean_energies(a) < sol.mean_energies(b);
    }
    return sol.quasienergies(a) < sol.quasienergies(b);
  });
  // Column i of each reordered block is column order[i] of the original.
  const auto reorder_blocks = [&](ComplexMatrix& blocks) {
    const int count = static_cast<int>(blocks.cols() / n);
    ComplexMatrix tmp(n, n);
    for (int b = 0; b < count; ++b) {
      for (int i = 0; i < n; ++i) tmp.col(i) = blocks.col(b * n + order[i]);
      blocks.middleCols(b * n, n) = tmp;
    }
  };
  reorder_blocks(sol.samples);
  reorder_blocks(sol.fourier);
  RealVector q(n), e(n), w(n);
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) {
    q(i) = sol.quasienergies(order[i]);
    e(i) = sol.mean_energies(order[i]);
    w(i) = sol.fourier_weight(order[i]);
    p[i] = sol.parity[order[i]];
  }
  sol.quasienergies = q;
  sol.mean_energies = e;
  sol.fourier_weight = w;
  sol.parity = p;
  return sol;
}

}  // namespace ddw::floquet
