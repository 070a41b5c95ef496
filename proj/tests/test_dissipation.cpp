#include <cmath>
#include <random>

#include "doctest.h"
#include "ddw/dissipation.hpp"
#include "ddw/model.hpp"
#include "ddw/observables.hpp"

using namespace ddw;
using namespace ddw::dissipation;

namespace {

const floquet::FloquetSolution& static_solution() {
  static const auto s = [] {
    model::ModelParams p;
    p.drive = 0.0;
    return floquet::floquet_states(p);
  }();
  return s;
}

const floquet::FloquetSolution& driven() {
  static const auto s = floquet::floquet_states(model::ModelParams{});
  return s;
}

ComplexMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

ComplexMatrix apply_generator(const ComplexMatrix& g, const ComplexMatrix& rho) {
  return unvectorize(g * vectorize(rho), static_cast<int>(rho.rows()));
}

}  // namespace

TEST_CASE("bath coefficient limits and detailed balance") {
  BathParams bath;
  bath.gamma = 2e-6;
  bath.temperature = 0.1;
  CHECK(bath_coefficient(0.0, bath) == doctest::Approx(bath.gamma * bath.temperature));
  CHECK(bath_coefficient(1e-9, bath) == doctest::Approx(bath.gamma * bath.temperature));
  for (double e : {1e-3, 0.05, 0.7, 3.0}) {
    const double ratio = bath_coefficient(-e, bath) / bath_coefficient(e, bath);
    CHECK(ratio == doctest::Approx(std::exp(e / bath.temperature)).epsilon(1e-12));
  }
  bath.temperature = 0.0;
  CHECK(bath_coefficient(0.4, bath) == 0.0);
  CHECK(bath_coefficient(-0.4, bath) == doctest::Approx(0.4 * bath.gamma));
  CHECK(bath_coefficient(0.0, bath) == 0.0);
  bath.temperature = 1e-4;
  CHECK(std::isfinite(bath_coefficient(-5.0, bath)));
  CHECK(bath_coefficient(5.0, bath) == 0.0);
}

TEST_CASE("bath validation") {
  BathParams b;
  b.gamma = -1.0;
  CHECK_THROWS_AS(b.validate(64), ArgumentError);
  b = {};
  b.n_states = 2;
  CHECK_THROWS_AS(b.validate(64), ArgumentError);
  b = {};
  b.n_states = 80;
  CHECK_THROWS_AS(b.validate(64), DimensionError);
  b = {};
  b.temperature = -1.0;
  CHECK_THROWS_AS(b.validate(64), ArgumentError);
}

TEST_CASE("position Fourier elements") {
  const auto x = position_fourier_elements(driven(), 10, 32);
  CHECK(x.symmetry_defect < 1e-10);
  for (int k = 0; k <= 32; ++k) CHECK((x.at(k) - x.at(-k).adjoint()).cwiseAbs().maxCoeff() == 0.0);

  // Undriven: a single harmonic per pair, carrying the static element.
  const auto& sol = static_solution();
  const auto x0 = position_fourier_elements(sol, 10, 32);
  const RealMatrix xs = model::position_operator(64);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(model::static_hamiltonian(sol.params));
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      const double stat = es.eigenvectors().col(a).dot(xs * es.eigenvectors().col(b));
      double sum = 0.0;
      int count = 0;
      for (int k = -32; k <= 32; ++k) {
        const double m = std::abs(x0.at(k)(a, b));
        sum += m * m;
        count += m > 1e-10;
      }
      CHECK(count <= 1);
      CHECK(std::abs(std::sqrt(sum) - std::abs(stat)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(position_fourier_elements(sol, 10, 200), ArgumentError);
  CHECK_THROWS_AS(position_fourier_elements(sol, 0, 4), DimensionError);
}

TEST_CASE("vectorization round trip") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = random_density(5, rng);
  const ComplexVector v = vectorize(rho);
  CHECK(v(1 * 5 + 3) == rho(1, 3));
  CHECK((unvectorize(v, 5) - rho).norm() == 0.0);
  CHECK_THROWS_AS(unvectorize(v, 4), DimensionError);
}

TEST_CASE("kernel structure") {
  const auto& sol = driven();
  BathParams bath;
  bath.temperature = 0.05;
  const auto kern = build_kernel(sol, bath);
  const int n = kern.n;
  CHECK(kern.trace_defect < 1e-10);

  // Golden-rule diagonal against the explicit harmonic sum.
  const auto x = position_fourier_elements(sol, n, bath.harmonics);
  const RealMatrix rates = golden_rule_rates(kern);
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      if (a == c) continue;
      double expected = 0.0;
      for (int k = -bath.harmonics; k <= bath.harmonics; ++k) {
        const double e = sol.quasienergies(a) - sol.quasienergies(c) + k * sol.params.frequency;
        expected += 2.0 * bath_coefficient(e, bath) * std::norm(x.at(k)(a, c));
      }
      CHECK(rates(a, c) == doctest::Approx(expected).epsilon(1e-10).scale(1e-20));
      CHECK(rates(a, c) >= -1e-12);
    }
  }

  // Linear in gamma.
  auto doubled = bath;
  doubled.gamma *= 2.0;
  const auto k2 = build_kernel(sol, doubled);
  CHECK((k2.tensor - 2.0 * kern.tensor).cwiseAbs().maxCoeff() <
        1e-12 * kern.tensor.cwiseAbs().maxCoeff());

  // Trace and Hermiticity preservation.
  std::mt19937_64 rng(5);
  const ComplexMatrix g = kern.generator();
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix d = apply_generator(g, random_density(n, rng));
    CHECK(std::abs(d.trace()) < 1e-10);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("undriven rates: detailed balance and no upward rates at T = 0") {
  const auto& sol = static_solution();
  BathParams bath;
  bath.temperature = 0.1;
  const RealMatrix r = golden_rule_rates(build_kernel(sol, bath));
  const double scale = r.maxCoeff();
  int checked = 0;
  for (int a = 0; a < bath.n_states; ++a) {
    for (int c = 0; c < bath.n_states; ++c) {
      const double ea = sol.mean_energies(a), ec = sol.mean_energies(c);
      if (ea <= ec || r(c, a) < 1e-12 * scale) continue;
      CHECK(r(a, c) / r(c, a) == doctest::Approx(std::exp(-(ea - ec) / 0.1)).epsilon(1e-10));
      ++checked;
    }
  }
  CHECK(checked > 10);

  bath.temperature = 0.0;
  const RealMatrix r0 = golden_rule_rates(build_kernel(sol, bath));
  // Off-zone harmonics of x carry round-off of order 1e-12.
  for (int a = 0; a < bath.n_states; ++a) {
    for (int c = 0; c < bath.n_states; ++c) {
      if (sol.mean_energies(a) > sol.mean_energies(c)) CHECK(r0(a, c) < 1e-15 * r0.maxCoeff());
    }
  }
}

TEST_CASE("strong driving opens upward rates at T = 0") {
  model::ModelParams p;
  p.frequency = 1.4;
  p.drive = 0.03;
  const auto sol = floquet::floquet_states(p);
  BathParams bath;
  bath.temperature = 0.0;
  const RealMatrix r = golden_rule_rates(build_kernel(sol, bath));
  double upward = 0.0;
  for (int a = 0; a < bath.n_states; ++a) {
    for (int c = 0; c < bath.n_states; ++c) {
      if (sol.mean_energies(a) > sol.mean_energies(c)) upward = std::max(upward, r(a, c));
    }
  }
  CHECK(upward > 1e-6 * r.maxCoeff());
}

TEST_CASE("asymptotic state") {
  const auto& sol = static_solution();
  for (double kT : {0.05, 0.1, 0.5}) {
    BathParams bath;
    bath.temperature = kT;
    const auto kern = build_kernel(sol, bath);
    const auto st = asymptotic_state(kern);
    CHECK(st.crosscheck_distance >= 0.0);
    CHECK(st.crosscheck_distance < 1e-6);
    CHECK(apply_generator(kern.generator(), st.rho).cwiseAbs().maxCoeff() < 1e-12 * kern.generator().cwiseAbs().maxCoeff());
    RealVector boltz(kern.n);
    for (int a = 0; a < kern.n; ++a) boltz(a) = std::exp(-(sol.mean_energies(a) - sol.mean_energies(0)) / kT);
    boltz /= boltz.sum();
    const RealVector pops = st.rho.diagonal().real();
    CHECK((pops - boltz).cwiseAbs().maxCoeff() / boltz.maxCoeff() < 1e-6);
  }

  BathParams cold;
  cold.temperature = 0.0;
  const auto ground = asymptotic_state(build_kernel(sol, cold));
  CHECK(ground.rho(0, 0).real() == doctest::Approx(1.0));
  CHECK(observables::renyi_entropy(ground.rho) < 1e-9);

  BathParams coherent;
  coherent.gamma = 0.0;
  CHECK_THROWS_AS(asymptotic_state(build_kernel(sol, coherent)), DegeneracyError);
}

TEST_CASE("RK4 integration") {
  const auto& sol = driven();
  BathParams bath;
  bath.gamma = 1e-3;  // visible relaxation within a short window
  bath.temperature = 0.05;
  const auto kern = build_kernel(sol, bath);
  const double limit = max_step(kern.generator());
  std::mt19937_64 rng(9);
  const ComplexMatrix r1 = random_density(kern.n, rng);
  const ComplexMatrix r2 = random_density(kern.n, rng);

  CHECK_THROWS_AS(integrate_master_equation(kern, r1, 10.0, 1.5 * limit), ArgumentError);
  CHECK_THROWS_AS(integrate_master_equation(kern, 2.0 * r1, 10.0, 0.5 * limit), ArgumentError);

  const double dt = 0.5 * limit;
  const auto a = integrate_master_equation(kern, r1, 200.0, dt, 50);
  const auto b = integrate_master_equation(kern, r2, 200.0, dt, 50);
  const auto c = integrate_master_equation(kern, 0.3 * r1 + 0.7 * r2, 200.0, dt, 50);
  REQUIRE(a.states.size() == c.states.size());
  CHECK(a.times.back() == doctest::Approx(200.0));
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const ComplexMatrix mix = 0.3 * a.states[i] + 0.7 * b.states[i];
    CHECK((c.states[i] - mix).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(a.trace_drift_rate < 1e-9);
  CHECK(a.hermiticity_defect < 1e-10);

  // Agreement with the spectral propagator, up to the RK4 phase error.
  const SpectralPropagator prop(kern.generator());
  CHECK(prop.reconstruction_defect() < 1e-8);
  CHECK((prop.evolve(r1, 200.0) - a.states.back()).cwiseAbs().maxCoeff() < 1e-6);

  // gamma = 0: a pure state stays pure. RK4 damps an oscillation of
  // frequency w by (w h)^6 / 144 per step, hence the short step.
  BathParams coherent = bath;
  coherent.gamma = 0.0;
  const auto k0 = build_kernel(sol, coherent);
  ComplexVector psi = ComplexVector::Zero(k0.n);
  psi(0) = psi(1) = psi(2) = 1.0 / std::sqrt(3.0);
  const auto pure = integrate_master_equation(k0, psi * psi.adjoint(), 500.0, 0.01, 500);
  for (const auto& rho : pure.states) CHECK(observables::renyi_entropy(rho) < 1e-9);
}
