#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ddw/floquet.hpp"
#include "ddw/sweep.hpp"
#include "ddw/types.hpp"

namespace ddw::observables {

/// S_q = ln tr(rho^q) / (1 - q). Negative eigenvalues of magnitude below
/// 1e-6 are clamped to zero; larger ones are an ArgumentError.
double renyi_entropy(const ComplexMatrix& rho, double order = 2.0);

/// Roles of the states taking part in a singlet-doublet crossing.
///
/// The ground doublet splits into the spectator (lowest mean energy) and
/// its partner of opposite generalized parity. The singlet is the state of
/// the partner's parity resonant with the doublet by one photon. Near the
/// crossing, partner and singlet are the adiabatic states with the lower and
/// higher mean energy.
struct StateLabels {
  int spectator = -1;
  int partner = -1;
  int singlet = -1;  ///< -1 when no resonant singlet exists
  bool hybrid = false;
  double singlet_fraction = 0.0;  ///< estimated sin^2(beta) of the partner
  std::string note;
};

StateLabels identify_states(const floquet::SpectrumPoint& point);
StateLabels identify_states(const floquet::FloquetSolution& solution);

/// One-photon resonant singlet candidates of a given parity for a doublet
/// member, ordered by quasienergy distance to it.
std::vector<int> singlet_candidates(const floquet::SpectrumPoint& point, int member,
                                    int parity, int exclude = -1);

/// Localized states at t = 0, in position basis and in Floquet coefficients.
///
/// The tunneling partner d of the spectator g is the combination of the
/// partner-sector pair with the largest position coupling to g; the top
/// state is its orthogonal complement in the pair. right/left are
/// (g +- d)/sqrt(2) with <x>_right > 0.
struct LocalizedStates {
  StateLabels labels;
  ComplexVector right;  ///< position basis
  ComplexVector left;
  ComplexVector right_coefficients;  ///< Floquet basis, all states
  ComplexVector left_coefficients;
  ComplexVector top_coefficients;  ///< zero when no singlet
  double right_position = 0.0;
  double left_position = 0.0;
};

LocalizedStates localized_states(const floquet::SpectrumPoint& point);
LocalizedStates localized_states(const floquet::FloquetSolution& solution);

/// |eps_singlet - eps_partner| folded into the zone.
double tunnel_frequency(const floquet::SpectrumPoint& point, const StateLabels& labels);

struct CoherenceTrace {
  std::vector<double> times;
  std::vector<double> s2;
  std::vector<double> p_return;  ///< initial localized state
  std::vector<double> p_left;    ///< opposite well
  std::vector<double> p_top;

  std::size_t size() const { return times.size(); }
};

/// Appends one sample given the density matrix in the chosen Floquet basis
/// and the coefficient vectors of the three reference states.
void record(CoherenceTrace& trace, double t, const ComplexMatrix& rho,
            const ComplexVector& initial, const ComplexVector& opposite,
            const ComplexVector& top);

struct DecoherenceEstimate {
  double rate = 0.0;  ///< 1/t_coh
  long long cycles = 0;
  double window = 0.0;  ///< t_p
  double s2_window = 0.0;
  bool saturated = false;  ///< target never reached within the cap
  std::vector<std::string> warnings;
};

inline constexpr double kEntropyTarget = 0.2;

/// 1/t_coh from a recorded trace. cycles = 0 selects the smallest number of
/// tunnel cycles reaching the entropy target; S2 is linearly interpolated.
DecoherenceEstimate decoherence_time(const CoherenceTrace& trace, double tunnel_period,
                                     long long cycles = 0, double target = kEntropyTarget);

/// Same protocol for an entropy available as a function of time (long
/// windows): doubling search then bisection on the cycle count.
DecoherenceEstimate decoherence_time(const std::function<double(double)>& s2_at,
                                     double tunnel_period, double target = kEntropyTarget,
                                     long long max_cycles = 1LL << 40);

/// Spearman rank correlation.
double rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ddw::observables
