#include "ddw/dissipation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ddw/model.hpp"

namespace ddw::dissipation {

void BathParams::validate(int basis_dim) const {
  if (!(gamma >= 0.0)) throw ArgumentError("bath: gamma must be non-negative");
  if (!(temperature >= 0.0)) throw ArgumentError("bath: temperature must be non-negative");
  if (n_states < 3) throw ArgumentError("bath: need at least 3 retained states");
  if (n_states > basis_dim) throw DimensionError("bath: more retained states than basis states");
  if (harmonics < 0) throw ArgumentError("bath: harmonics must be non-negative");
}

PositionElements position_fourier_elements(const floquet::FloquetSolution& solution,
                                           int n_states, int harmonics) {
  const int m = solution.sample_count();
  if (harmonics < 0 || m < 2 * harmonics + 2) {
    throw ArgumentError("position_fourier_elements: harmonics alias with the time samples");
  }
  if (n_states < 1 || n_states > solution.dim()) {
    throw DimensionError("position_fourier_elements: invalid number of states");
  }
  const RealMatrix x =
      model::position_operator(solution.params.basis_size, solution.params.basis_scale);
  PositionElements out;
  out.harmonics = harmonics;
  out.blocks.assign(2 * harmonics + 1, ComplexMatrix::Zero(n_states, n_states));
  for (int j = 0; j < m; ++j) {
    const auto phi = solution.mode(j).leftCols(n_states);
    ComplexMatrix a = phi.adjoint() * (x * phi);
    a = 0.5 * (a + a.adjoint()).eval();
    for (int k = -harmonics; k <= harmonics; ++k) {
      out.blocks[k + harmonics] += std::polar(1.0 / m, -2.0 * kPi * k * j / m) * a;
    }
  }
  for (int k = 0; k <= harmonics; ++k) {
    const ComplexMatrix& plus = out.blocks[k + harmonics];
    const ComplexMatrix& minus = out.blocks[harmonics - k];
    out.symmetry_defect = std::max(out.symmetry_defect, (plus - minus.adjoint()).cwiseAbs().maxCoeff());
  }
  if (out.symmetry_defect > 1e-10) {
    throw NumericalError("position_fourier_elements: X_k != X_{-k}^dagger", out.symmetry_defect);
  }
  for (int k = 0; k <= harmonics; ++k) {
    const ComplexMatrix avg = 0.5 * (out.blocks[k + harmonics] + out.blocks[harmonics - k].adjoint());
    out.blocks[k + harmonics] = avg;
    out.blocks[harmonics - k] = avg.adjoint();
  }
  return out;
}

double bath_coefficient(double energy, const BathParams& bath) {
  if (bath.temperature == 0.0) return energy < 0.0 ? -bath.gamma * energy : 0.0;
  if (energy == 0.0) return bath.gamma * bath.temperature;
  return bath.gamma * energy / std::expm1(energy / bath.temperature);
}

ComplexMatrix DissipativeKernel::generator() const {
  ComplexMatrix g = tensor;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      g(index(a, b), index(a, b)) += -kI * (quasienergies(a) - quasienergies(b));
    }
  }
  return g;
}

DissipativeKernel build_kernel(const PositionElements& x, const RealVector& quasienergies,
                               double frequency, const BathParams& bath) {
  const int n = x.size();
  const int kmax = x.harmonics;
  if (n == 0 || quasienergies.size() != n) {
    throw DimensionError("build_kernel: position elements and quasienergies differ in size");
  }
  if (static_cast<int>(x.blocks.size()) != 2 * kmax + 1) {
    throw DimensionError("build_kernel: missing Fourier components of x");
  }
  DissipativeKernel kern;
  kern.n = n;
  kern.frequency = frequency;
  kern.quasienergies = quasienergies;
  kern.tensor = ComplexMatrix::Zero(n * n, n * n);

  // nk[k](a, c) = N(eps_a - eps_c + k Omega)
  std::vector<RealMatrix> nk(2 * kmax + 1, RealMatrix(n, n));
  for (int k = -kmax; k <= kmax; ++k) {
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        nk[k + kmax](a, c) =
            bath_coefficient(quasienergies(a) - quasienergies(c) + k * frequency, bath);
      }
    }
  }

  ComplexMatrix sink_left = ComplexMatrix::Zero(n, n);   // A_{ac}
  ComplexMatrix sink_right = ComplexMatrix::Zero(n, n);  // B_{db}
  for (int k = -kmax; k <= kmax; ++k) {
    const ComplexMatrix& xp = x.at(k);
    const ComplexMatrix& xm = x.at(-k);
    const RealMatrix& nn = nk[k + kmax];
    // A_{ac} += sum_e X_{ae,-k} N_{ec,k} X_{ec,k}
    sink_left += xm * xp.cwiseProduct(nn.cast<Complex>());
    // B_{db} += sum_e N_{ed,k} X_{de,-k} X_{eb,k}
    const ComplexMatrix weighted = xm.cwiseProduct(nn.transpose().cast<Complex>());
    sink_right += weighted * xp;
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        const Complex xac = xp(a, c);
        if (xac == Complex(0.0)) continue;
        const double nac = nn(a, c);
        for (int b = 0; b < n; ++b) {
          for (int d = 0; d < n; ++d) {
            kern.tensor(a * n + b, c * n + d) += (nac + nn(b, d)) * xac * xm(d, b);
          }
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        kern.tensor(a * n + b, c * n + b) -= sink_left(a, c);
        kern.tensor(a * n + b, a * n + c) -= sink_right(c, b);
      }
    }
  }

  for (int c = 0; c < n * n; ++c) {
    Complex sum = 0.0;
    for (int a = 0; a < n; ++a) sum += kern.tensor(a * n + a, c);
    kern.trace_defect = std::max(kern.trace_defect, std::abs(sum));
  }
  if (kern.trace_defect > 1e-10) {
    throw NumericalError("build_kernel: kernel does not preserve the trace", kern.trace_defect);
  }
  return kern;
}

DissipativeKernel build_kernel(const floquet::FloquetSolution& solution, const BathParams& bath) {
  bath.validate(solution.dim());
  const auto x = position_fourier_elements(solution, bath.n_states, bath.harmonics);
  return build_kernel(x, solution.quasienergies.head(bath.n_states), solution.params.frequency,
                      bath);
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const int n = static_cast<int>(rho.rows());
  ComplexVector v(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) v(a * n + b) = rho(a, b);
  }
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionError("unvectorize: size mismatch");
  ComplexMatrix rho(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) rho(a, b) = v(a * n + b);
  }
  return rho;
}

void check_density_matrix(const ComplexMatrix& rho, int n) {
  if (rho.rows() != n || rho.cols() != n) throw DimensionError("density matrix has the wrong size");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ArgumentError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-9) throw ArgumentError("density matrix trace differs from 1");
}

double min_eigenvalue(const ComplexMatrix& rho) {
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_step(const ComplexMatrix& generator) {
  const double norm = generator.cwiseAbs().rowwise().sum().maxCoeff();
  return norm > 0.0 ? 0.1 / norm : std::numeric_limits<double>::infinity();
}

Trajectory integrate_master_equation(const DissipativeKernel& kernel, const ComplexMatrix& rho0,
                                     double t_end, double dt, int stride) {
  check_density_matrix(rho0, kernel.n);
  if (!(t_end >= 0.0)) throw ArgumentError("integrate_master_equation: t_end must be non-negative");
  if (!(dt > 0.0)) throw ArgumentError("integrate_master_equation: dt must be positive");
  if (stride < 1) throw ArgumentError("integrate_master_equation: stride must be positive");
  const ComplexMatrix g = kernel.generator();
  const double limit = max_step(g);
  if (!(dt < limit)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "integrate_master_equation: dt = " << dt << " too large for the generator; use dt < "
        << limit;
    throw ArgumentError(msg.str());
  }
  const long long steps = t_end == 0.0 ? 0 : static_cast<long long>(std::ceil(t_end / dt - 1e-12));
  const double h = steps == 0 ? 0.0 : t_end / steps;

  Trajectory traj;
  ComplexVector v = vectorize(rho0);
  auto sample = [&](double t) {
    ComplexMatrix rho = unvectorize(v, kernel.n);
    if (t > 0.0) {
      traj.trace_drift_rate = std::max(traj.trace_drift_rate, std::abs(rho.trace() - Complex(1.0)) / t);
    }
    traj.hermiticity_defect = std::max(traj.hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, min_eigenvalue(rho));
    traj.times.push_back(t);
    traj.states.push_back(std::move(rho));
  };
  traj.min_eigenvalue = min_eigenvalue(rho0);
  sample(0.0);
  ComplexVector k1, k2, k3, k4;
  for (long long s = 1; s <= steps; ++s) {
    k1.noalias() = g * v;
    k2.noalias() = g * (v + 0.5 * h * k1);
    k3.noalias() = g * (v + 0.5 * h * k2);
    k4.noalias() = g * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % stride == 0 || s == steps) sample(s * h);
  }
  return traj;
}

SpectralPropagator::SpectralPropagator(const ComplexMatrix& generator)
    : n_(static_cast<int>(std::lround(std::sqrt(static_cast<double>(generator.rows()))))) {
  if (generator.rows() != generator.cols() ||
      static_cast<Eigen::Index>(n_) * n_ != generator.rows()) {
    throw DimensionError("SpectralPropagator: generator must be n^2 x n^2");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(generator);
  if (es.info() != Eigen::Success) {
    throw NumericalError("SpectralPropagator: eigendecomposition failed", 0.0);
  }
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  lu_.compute(vectors_);
  const ComplexMatrix rebuilt = vectors_ * values_.asDiagonal() * lu_.inverse();
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  defect_ = (rebuilt - generator).cwiseAbs().maxCoeff() / scale;
  if (defect_ > 1e-8) {
    throw NumericalError("SpectralPropagator: generator is not reliably diagonalizable", defect_);
  }
}

ComplexVector SpectralPropagator::amplitudes(const ComplexMatrix& rho0) const {
  return lu_.solve(vectorize(rho0));
}

ComplexMatrix SpectralPropagator::evolve_amplitudes(const ComplexVector& amplitudes, double t) const {
  ComplexVector w(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) w(i) = amplitudes(i) * std::exp(values_(i) * t);
  return unvectorize(vectors_ * w, n_);
}

ComplexMatrix SpectralPropagator::evolve(const ComplexMatrix& rho0, double t) const {
  return evolve_amplitudes(amplitudes(rho0), t);
}

AsymptoticState asymptotic_state(const DissipativeKernel& kernel, bool crosscheck) {
  const int n = kernel.n;
  const ComplexMatrix g = kernel.generator();
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const Eigen::Index last = sv.size() - 1;
  const double tol = kNullTolerance * std::max(sv(0), 1e-300);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol) ++null_dim;
  }
  if (null_dim != 1) {
    std::ostringstream msg;
    msg << "asymptotic_state: generator null space has dimension " << null_dim;
    throw DegeneracyError(msg.str(), null_dim);
  }
  AsymptoticState out;
  out.null_singular_value = sv(last);
  out.next_singular_value = sv(last - 1);
  ComplexMatrix rho = unvectorize(svd.matrixV().col(last), n);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw NumericalError("asymptotic_state: null vector is traceless", std::abs(tr));
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  out.rho = rho;
  out.min_eigenvalue = min_eigenvalue(rho);

  if (crosscheck) {
    const SpectralPropagator prop(g);
    double slowest = std::numeric_limits<double>::infinity();
    Eigen::Index stationary = 0;
    prop.eigenvalues().cwiseAbs().minCoeff(&stationary);
    for (Eigen::Index i = 0; i < prop.eigenvalues().size(); ++i) {
      if (i == stationary) continue;
      slowest = std::min(slowest, std::abs(prop.eigenvalues()(i).real()));
    }
    if (!(slowest > 0.0) || !std::isfinite(slowest)) {
      throw DegeneracyError("asymptotic_state: undamped mode besides the stationary state", 2);
    }
    const ComplexMatrix start = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
    ComplexMatrix late = prop.evolve(start, 60.0 / slowest);
    late = 0.5 * (late + late.adjoint()).eval();
    out.crosscheck_distance = (late - rho).cwiseAbs().maxCoeff();
    if (out.crosscheck_distance > 1e-6) {
      throw NumericalError("asymptotic_state: long-time propagation disagrees with the null vector",
                           out.crosscheck_distance);
    }
  }
  return out;
}

RealMatrix golden_rule_rates(const DissipativeKernel& kernel) {
  const int n = kernel.n;
  RealMatrix r = RealMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      if (a != c) r(a, c) = kernel.at(a, a, c, c).real();
    }
  }
  return r;
}

}  // namespace ddw::dissipation
