#include "ddw/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ddw/model.hpp"

namespace ddw::observables {

double renyi_entropy(const ComplexMatrix& rho, double order) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw DimensionError("renyi_entropy: density matrix must be square");
  }
  if (!(order > 0.0) || order == 1.0) {
    throw ArgumentError("renyi_entropy: order must be positive and different from 1");
  }
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > 1e-6) throw ArgumentError("renyi_entropy: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w < -1e-6) throw ArgumentError("renyi_entropy: density matrix has a negative eigenvalue");
    if (w > 0.0) sum += order == 2.0 ? w * w : std::pow(w, order);
  }
  return std::log(sum) / (1.0 - order);
}

namespace {

std::vector<int> by_mean_energy(const floquet::SpectrumPoint& p) {
  std::vector<int> order(p.dim());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p.mean_energies(a) < p.mean_energies(b); });
  return order;
}

}  // namespace

std::vector<int> singlet_candidates(const floquet::SpectrumPoint& point, int member,
                                    int parity, int exclude) {
  const double omega = point.params.frequency;
  const auto order = by_mean_energy(point);
  const double ground = point.mean_energies(order.front());
  const double em = point.mean_energies(member);
  std::vector<int> out;
  for (int j = 0; j < point.dim(); ++j) {
    if (j == member || j == exclude || point.parity[j] != parity) continue;
    // Photon-number sum rule, unchanged by mixing of the member with j.
    const double excess = em + point.mean_energies(j) - 2.0 * ground;
    if (std::abs(excess - omega) < 0.25 * omega) out.push_back(j);
  }
  auto distance = [&](int j) {
    return std::abs(fold_quasienergy(point.quasienergies(j) - point.quasienergies(member), omega));
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](int a, int b) { return distance(a) < distance(b); });
  return out;
}

StateLabels identify_states(const floquet::SpectrumPoint& point) {
  if (point.dim() < 3) throw LabelError("identify_states: fewer than three states");
  const auto order = by_mean_energy(point);
  StateLabels labels;
  labels.spectator = order[0];
  const int sp = point.parity[labels.spectator];
  if (sp == 0) throw LabelError("identify_states: lowest state has unresolved parity");
  for (int idx : order) {
    if (idx == labels.spectator) continue;
    if (point.parity[idx] == 0) {
      std::ostringstream msg;
      msg << "identify_states: state " << idx << " below the doublet partner has unresolved parity";
      throw LabelError(msg.str());
    }
    if (point.parity[idx] == -sp) {
      labels.partner = idx;
      break;
    }
  }
  if (labels.partner < 0) throw LabelError("identify_states: no doublet partner of opposite parity");
  if (std::abs(point.mean_energies(order[0]) - point.mean_energies(order[1])) < 1e-12 &&
      point.parity[order[0]] == point.parity[order[1]]) {
    std::ostringstream msg;
    msg << "identify_states: ambiguous doublet, states " << order[0] << " and " << order[1]
        << " tie in mean energy";
    throw LabelError(msg.str());
  }

  const auto candidates = singlet_candidates(point, labels.partner, -sp);
  if (candidates.empty()) {
    labels.note = "no resonant singlet";
    return labels;
  }
  labels.singlet = candidates.front();
  const double eg = point.mean_energies(labels.spectator);
  const double ep = point.mean_energies(labels.partner);
  const double es = point.mean_energies(labels.singlet);
  // Mean energies are convex mixtures of the undressed pair, whose sum is
  // conserved; the undressed partner sits at the spectator's mean energy.
  const double span = ep + es - 2.0 * eg;
  labels.singlet_fraction = span > 0.0 ? std::clamp((ep - eg) / span, 0.0, 1.0) : 0.0;
  labels.hybrid = labels.singlet_fraction >= 0.1;
  return labels;
}

StateLabels identify_states(const floquet::FloquetSolution& solution) {
  return identify_states(floquet::summarize(solution, 0.0));
}

LocalizedStates localized_states(const floquet::SpectrumPoint& point) {
  LocalizedStates out;
  out.labels = identify_states(point);
  const int n = point.dim();
  const int g = out.labels.spectator;
  const int p = out.labels.partner;
  const int s = out.labels.singlet;
  const RealMatrix x = model::position_operator(point.params.basis_size, point.params.basis_scale);
  const ComplexMatrix& phi = point.initial_modes;
  const ComplexVector xg = x * phi.col(g);
  const Complex a = xg.dot(phi.col(p));  // <g|x|p>
  const Complex c = s >= 0 ? xg.dot(phi.col(s)) : Complex(0.0);
  const double norm = std::sqrt(std::norm(a) + std::norm(c));
  if (!(norm > 1e-12)) throw LabelError("localized_states: doublet has no position coupling");

  ComplexVector d = ComplexVector::Zero(n);
  out.top_coefficients = ComplexVector::Zero(n);
  d(p) = std::conj(a) / norm;
  if (s >= 0) {
    d(s) = std::conj(c) / norm;
    out.top_coefficients(p) = -c / norm;
    out.top_coefficients(s) = a / norm;
  }
  ComplexVector gvec = ComplexVector::Zero(n);
  gvec(g) = 1.0;
  out.right_coefficients = (gvec + d) / std::sqrt(2.0);
  out.left_coefficients = (gvec - d) / std::sqrt(2.0);
  out.right = phi * out.right_coefficients;
  out.left = phi * out.left_coefficients;
  out.right_position = out.right.dot(x * out.right).real();
  out.left_position = out.left.dot(x * out.left).real();
  if (!(out.right_position > 0.0)) {
    throw LabelError("localized_states: right state is not localized at positive x");
  }
  return out;
}

LocalizedStates localized_states(const floquet::FloquetSolution& solution) {
  return localized_states(floquet::summarize(solution, 0.0));
}

double tunnel_frequency(const floquet::SpectrumPoint& point, const StateLabels& labels) {
  if (labels.singlet < 0) throw LabelError("tunnel_frequency: no singlet identified");
  return std::abs(fold_quasienergy(
      point.quasienergies(labels.singlet) - point.quasienergies(labels.partner),
      point.params.frequency));
}

void record(CoherenceTrace& trace, double t, const ComplexMatrix& rho,
            const ComplexVector& initial, const ComplexVector& opposite,
            const ComplexVector& top) {
  auto occupation = [&](const ComplexVector& v) { return v.dot(rho * v).real(); };
  trace.times.push_back(t);
  trace.s2.push_back(renyi_entropy(rho, 2.0));
  trace.p_return.push_back(occupation(initial));
  trace.p_left.push_back(occupation(opposite));
  trace.p_top.push_back(occupation(top));
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const std::size_t i = it - xs.begin();
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

DecoherenceEstimate decoherence_time(const CoherenceTrace& trace, double tunnel_period,
                                     long long cycles, double target) {
  if (!(tunnel_period > 0.0)) throw ArgumentError("decoherence_time: tunnel period must be positive");
  if (trace.size() < 2) throw ArgumentError("decoherence_time: trace too short");
  const double t0 = trace.times.front();
  const double span = trace.times.back() - t0;
  const long long available = static_cast<long long>(std::floor(span / tunnel_period * (1.0 + 1e-12)));
  if (available < 1) throw ArgumentError("decoherence_time: trace shorter than one tunnel cycle");
  const double s0 = trace.s2.front();
  auto s2_at = [&](long long n) { return interpolate(trace.times, trace.s2, t0 + n * tunnel_period); };

  DecoherenceEstimate est;
  if (cycles > 0) {
    if (cycles > available) throw ArgumentError("decoherence_time: trace shorter than the requested window");
    est.cycles = cycles;
  } else {
    est.cycles = available;
    est.saturated = true;
    for (long long n = 1; n <= available; ++n) {
      if (s2_at(n) >= target) {
        est.cycles = n;
        est.saturated = false;
        break;
      }
    }
  }
  est.window = est.cycles * tunnel_period;
  est.s2_window = s2_at(est.cycles);
  est.rate = (est.s2_window - s0) / est.window;

  double peak = s0;
  for (std::size_t i = 0; i < trace.size() && trace.times[i] <= t0 + est.window; ++i) {
    peak = std::max(peak, trace.s2[i]);
    if (trace.s2[i] < peak - 1e-3) {
      est.warnings.push_back("S2 decreases within the window");
      break;
    }
  }
  if (est.s2_window <= s0) est.warnings.push_back("no net entropy growth");
  return est;
}

DecoherenceEstimate decoherence_time(const std::function<double(double)>& s2_at,
                                     double tunnel_period, double target, long long max_cycles) {
  if (!(tunnel_period > 0.0)) throw ArgumentError("decoherence_time: tunnel period must be positive");
  const double s0 = s2_at(0.0);
  auto s2 = [&](long long n) { return s2_at(n * tunnel_period); };
  DecoherenceEstimate est;
  long long hi = 1;
  double last = s0;
  double value = s2(hi);
  while (value < target) {
    if (value < last - 1e-3) est.warnings.push_back("S2 decreases between doubling points");
    last = value;
    if (hi >= max_cycles) {
      est.saturated = true;
      break;
    }
    hi = std::min(2 * hi, max_cycles);
    value = s2(hi);
  }
  if (!est.saturated) {
    long long lo = hi / 2;  // fails the target (or is zero)
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      if (s2(mid) >= target) hi = mid;
      else lo = mid;
    }
  }
  est.cycles = hi;
  est.window = hi * tunnel_period;
  est.s2_window = s2(hi);
  est.rate = (est.s2_window - s0) / est.window;
  if (est.s2_window <= s0) est.warnings.push_back("no net entropy growth");
  return est;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mean = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mean;
    i = j + 1;
  }
  return r;
}

}  // namespace

double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ArgumentError("rank_correlation: need two samples of equal length >= 2");
  }
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = 0.5 * (n - 1.0);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace ddw::observables
