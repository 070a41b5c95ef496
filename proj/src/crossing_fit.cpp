#include <algorithm>
#include <cmath>
#include <sstream>

#include "ddw/observables.hpp"
#include "ddw/three_state.hpp"

namespace ddw::three_state {

ThreeStateParams CrossingFit::at(double axis_value) const {
  ThreeStateParams p;
  p.doublet_quasienergy = doublet_quasienergy(axis_value);
  p.splitting = splitting(axis_value);
  p.detuning = detuning(axis_value);
  p.coupling = params.coupling;
  return p;
}

namespace {

struct PairTrace {
  std::vector<int> first, second;
  int exchanges = 0;
};

double omega_at(const floquet::SweepResult& s, int i) { return s.points[i].params.frequency; }

double pair_difference(const floquet::SweepResult& s, int i, int a, int b) {
  const auto& q = s.points[i].quasienergies;
  return fold_quasienergy(q(b) - q(a), omega_at(s, i));
}

// Counts sign changes of E_upper - E_lower, the pair ordered by quasienergy.
PairTrace trace_pair(const floquet::SweepResult& s, int a, int b) {
  PairTrace t{s.track(a), s.track(b), 0};
  int last = 0;
  for (int i = 0; i < s.size(); ++i) {
    const int x = t.first[i], y = t.second[i];
    const double d = pair_difference(s, i, x, y);
    const auto& e = s.points[i].mean_energies;
    const double exchange = d >= 0.0 ? e(y) - e(x) : e(x) - e(y);
    const int sign = exchange > 0.0 ? 1 : (exchange < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (last != 0 && sign != last) ++t.exchanges;
      last = sign;
    }
  }
  return t;
}

LinearModel fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw FitError("fit_crossing: degenerate far-field window");
  LinearModel m;
  m.slope = (n * sxy - sx * sy) / den;
  m.intercept = (sy - m.slope * sx) / n;
  return m;
}

}  // namespace

CrossingFit fit_crossing(const floquet::SweepResult& sweep, const FitOptions& options) {
  const int n = sweep.size();
  if (n < 8) throw FitError("fit_crossing: need at least 8 grid points");
  if (!(options.window_fraction > 0.0 && options.window_fraction < 0.5)) {
    throw FitError("fit_crossing: window fraction must lie in (0, 0.5)");
  }
  observables::StateLabels labels;
  try {
    labels = observables::identify_states(sweep.points.front());
  } catch (const LabelError& e) {
    throw FitError(std::string("fit_crossing: ") + e.what());
  }
  if (labels.singlet < 0) throw FitError("fit_crossing: no singlet resonant with the doublet");

  const auto& first = sweep.points.front();
  const int spectator_parity = first.parity[labels.spectator];
  const auto spectator_singlets = observables::singlet_candidates(
      first, labels.spectator, spectator_parity, labels.partner);

  PairTrace crossing = trace_pair(sweep, labels.partner, labels.singlet);
  int total = crossing.exchanges;
  if (!spectator_singlets.empty()) {
    total += trace_pair(sweep, labels.spectator, spectator_singlets.front()).exchanges;
  }
  if (total != 1) {
    std::ostringstream msg;
    msg << "fit_crossing: expected exactly one singlet-doublet crossing, found " << total;
    throw FitError(msg.str());
  }

  CrossingFit fit;
  fit.spectator_state = labels.spectator;
  fit.partner_state = labels.partner;
  fit.singlet_state = labels.singlet;
  fit.spectator_path = sweep.track(labels.spectator);
  fit.partner_path = crossing.first;
  fit.singlet_path = crossing.second;

  const auto& x = sweep.grid;
  for (int i = 0; i < n; ++i) {
    const int a = fit.partner_path[i], b = fit.singlet_path[i];
    const double d = pair_difference(sweep, i, a, b);
    const auto& e = sweep.points[i].mean_energies;
    fit.gaps.push_back(std::abs(d));
    fit.lower_mean_energy.push_back(d >= 0.0 ? e(a) : e(b));
    fit.upper_mean_energy.push_back(d >= 0.0 ? e(b) : e(a));
    fit.spectator_mean_energy.push_back(e(fit.spectator_path[i]));
  }

  const int c = static_cast<int>(std::min_element(fit.gaps.begin(), fit.gaps.end()) - fit.gaps.begin());
  if (c == 0 || c == n - 1) throw FitError("fit_crossing: minimal gap at the sweep edge");
  fit.center_index = c;

  // gap^2 = delta^2 + 4 b^2 is a parabola for linear delta.
  {
    const double x0 = x[c - 1], x1 = x[c], x2 = x[c + 1];
    const double y0 = fit.gaps[c - 1] * fit.gaps[c - 1];
    const double y1 = fit.gaps[c] * fit.gaps[c];
    const double y2 = fit.gaps[c + 1] * fit.gaps[c + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    if (!(curvature > 0.0)) throw FitError("fit_crossing: gap is not convex at its minimum");
    const double slope = d01 - curvature * (x0 + x1);
    fit.center = -slope / (2.0 * curvature);
    const double minimum = y1 - curvature * (fit.center - x1) * (fit.center - x1);
    if (!(minimum > 0.0)) throw FitError("fit_crossing: vanishing minimal gap");
    if (fit.center < std::min(x0, x2) || fit.center > std::max(x0, x2)) {
      throw FitError("fit_crossing: refined center outside the bracketing grid points");
    }
    fit.gap_min = std::sqrt(minimum);
  }

  const int w = std::max(2, static_cast<int>(std::floor(options.window_fraction * n)));
  if (c < w || c >= n - w) throw FitError("fit_crossing: crossing lies inside a far-field window");

  // Spectator quasienergy unwrapped across zone boundaries.
  std::vector<double> doublet(n);
  for (int i = 0; i < n; ++i) {
    doublet[i] = sweep.points[i].quasienergies(fit.spectator_path[i]);
    if (i > 0) {
      const double om = omega_at(sweep, i);
      doublet[i] = doublet[i - 1] + fold_quasienergy(doublet[i] - doublet[i - 1], om);
    }
  }

  std::vector<double> wx, wdetuning, wsplitting, wdoublet;
  for (int i = 0; i < n; ++i) {
    if (i >= w && i < n - w) continue;
    const auto& pt = sweep.points[i];
    const int a = fit.partner_path[i], b = fit.singlet_path[i];
    const bool a_low = pt.mean_energies(a) <= pt.mean_energies(b);
    const int dlike = a_low ? a : b;
    const int tlike = a_low ? b : a;
    const double om = pt.params.frequency;
    wx.push_back(x[i]);
    wdetuning.push_back(fold_quasienergy(pt.quasienergies(tlike) - pt.quasienergies(dlike), om));
    wsplitting.push_back(
        fold_quasienergy(pt.quasienergies(dlike) - pt.quasienergies(fit.spectator_path[i]), om));
    wdoublet.push_back(doublet[i]);
  }
  fit.detuning = fit_line(wx, wdetuning);
  fit.splitting = fit_line(wx, wsplitting);
  fit.doublet_quasienergy = fit_line(wx, wdoublet);

  fit.params.coupling = 0.5 * fit.gap_min;
  fit.params = fit.at(fit.center);
  if (!(fit.params.splitting > 0.0)) throw FitError("fit_crossing: fitted doublet splitting is not positive");
  return fit;
}

}  // namespace ddw::three_state
