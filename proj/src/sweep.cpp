#include "ddw/sweep.hpp"

#include <cmath>
#include <limits>

#include "ddw/parallel.hpp"

namespace ddw::floquet {

model::ModelParams with_axis(model::ModelParams params, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::frequency:
      params.frequency = value;
      break;
    case SweepAxis::drive:
      params.drive = value;
      break;
  }
  return params;
}

SpectrumPoint summarize(const FloquetSolution& solution, double value) {
  SpectrumPoint p;
  p.value = value;
  p.params = solution.params;
  p.quasienergies = solution.quasienergies;
  p.mean_energies = solution.mean_energies;
  p.parity = solution.parity;
  p.initial_modes = solution.initial_modes();
  return p;
}

std::vector<int> SweepResult::track(int state) const {
  std::vector<int> path{state};
  for (const auto& step : lineage) path.push_back(step[path.back()]);
  return path;
}

namespace {

// Hungarian algorithm (potentials form) for a square cost matrix; returns
// the column assigned to each row at minimal total cost.
std::vector<int> min_cost_assignment(const RealMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    owner[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int r = owner[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r - 1, c - 1) - u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[owner[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const int col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int c = 1; c <= n; ++c) assignment[owner[c] - 1] = c - 1;
  return assignment;
}

}  // namespace

std::vector<int> match_states(const ComplexMatrix& before, const ComplexMatrix& after,
                              std::vector<double>* overlaps) {
  if (before.cols() != after.cols() || before.rows() != after.rows()) {
    throw DimensionError("match_states: state sets differ in shape");
  }
  const int n = static_cast<int>(before.cols());
  const RealMatrix overlap = (before.adjoint() * after).cwiseAbs();
  std::vector<int> assignment(n);
  std::vector<bool> taken(n, false);
  bool permutation = true;
  for (int a = 0; a < n; ++a) {
    Eigen::Index best = 0;
    overlap.row(a).maxCoeff(&best);
    assignment[a] = static_cast<int>(best);
    if (taken[best]) permutation = false;
    taken[best] = true;
  }
  if (!permutation) assignment = min_cost_assignment(-overlap);
  if (overlaps) {
    overlaps->resize(n);
    for (int a = 0; a < n; ++a) (*overlaps)[a] = overlap(a, assignment[a]);
  }
  return assignment;
}

SweepResult sweep(const model::ModelParams& base, SweepAxis axis,
                  const std::vector<double>& values, const Options& options,
                  int threads) {
  if (values.empty()) throw ArgumentError("sweep: empty grid");
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool up = values[1] > values[0];
    if ((up && !(values[i] > values[i - 1])) || (!up && !(values[i] < values[i - 1]))) {
      throw ArgumentError("sweep: grid values must be strictly monotone");
    }
  }
  SweepResult result;
  result.axis = axis;
  result.grid = values;
  result.points.resize(values.size());
  parallel_for(static_cast<int>(values.size()), threads, [&](int i) {
    const auto params = with_axis(base, axis, values[i]);
    result.points[i] = summarize(floquet_states(params, options), values[i]);
  });
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    std::vector<double> overlaps;
    result.lineage.push_back(match_states(result.points[i].initial_modes,
                                          result.points[i + 1].initial_modes, &overlaps));
    result.best_overlap.push_back(std::move(overlaps));
  }
  return result;
}

}  // namespace ddw::floquet
