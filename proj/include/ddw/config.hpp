#pragma once

#include <string>
#include <vector>

#include "ddw/dissipation.hpp"
#include "ddw/floquet.hpp"
#include "ddw/model.hpp"
#include "ddw/sweep.hpp"
#include "ddw/types.hpp"

// Flat `key = value` run configuration. `#` starts a comment; blank lines
// are ignored. An empty document yields the defaults (spectrum experiment);
// any other document must name its experiment.

namespace ddw::config {

enum class Experiment { spectrum, dynamics, decoherence, asymptotic };

std::string to_string(Experiment e);
std::string to_string(floquet::SweepAxis a);

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  Experiment experiment = Experiment::spectrum;
  model::ModelParams model;
  dissipation::BathParams bath;
  floquet::Options floquet;

  floquet::SweepAxis sweep_axis = floquet::SweepAxis::frequency;
  double sweep_from = 1.4;
  double sweep_to = 1.6;
  int sweep_points = 101;

  /// Dynamics and asymptotic runs: replace the frequency by the fitted
  /// crossing center of the sweep range.
  bool at_crossing = false;
  std::vector<double> temperatures{1e-4};  ///< decoherence and asymptotic runs

  double dt = 0.05;                 ///< master-equation step
  double t_end = 0.0;               ///< 0: tunnel_cycles tunnel periods
  double tunnel_cycles = 1.0;
  int output_stride = 100;

  int threads = 0;  ///< 0: FLOQUET_THREADS, then all available units
  std::string output = "out.csv";

  void validate() const;
  std::vector<double> sweep_grid() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical document; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Doubles with 17 significant digits.
std::string format_double(double v);

/// Applies one `key = value` assignment; throws ArgumentError on unknown
/// keys or malformed values.
void assign(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace ddw::config
