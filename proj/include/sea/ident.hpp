#pragma once

#include <span>
#include <vector>

#include "sea/xfer.hpp"

namespace sea {

struct FrfEstimate {
  std::vector<double> freqs_hz;
  std::vector<double> magnitude_db;
  std::vector<double> phase_deg;  // unwrapped along the grid
  std::vector<double> coherence;  // magnitude-squared coherence in [0, 1]

  FrequencyResponse response() const { return {freqs_hz, magnitude_db, phase_deg}; }
};

struct WelchOptions {
  int segments = 8;  // Hann-windowed, 50% overlap
};

// H(f) = S_uy(f) / S_uu(f) from averaged windowed cross-spectra, evaluated
// directly at the requested frequencies. Segment means are removed.
FrfEstimate estimate_frf(std::span<const double> input, std::span<const double> output, double dt_s,
                         std::span<const double> freqs_hz, const WelchOptions& opts = {});

enum class DbReference { kDcGain, kUnity };

// First frequency where the magnitude falls 10 log10(2) dB below the
// reference. On a grid the crossing is interpolated linearly in dB against
// log f and the first grid point stands in for DC. On a transfer function the
// crossing is bracketed on a dense log grid and refined by bisection.
// Throws NumericalError when there is no crossing.
double bandwidth_3db(const FrequencyResponse& fr, DbReference ref = DbReference::kDcGain);
double bandwidth_3db(const TransferFunction& tf, DbReference ref = DbReference::kDcGain, double f_lo_hz = 1e-3,
                     double f_hi_hz = 1e4);

// Unwrapped phase, interpolated linearly against log f on a grid. Throws
// ValidationError outside the grid.
double phase_at(const FrequencyResponse& fr, double f_hz);
// Unwrapped from f/1e4 upward.
double phase_at(const TransferFunction& tf, double f_hz);

// Margins of a loop transfer function L on a dense log grid. Crossings are
// interpolated; a margin with no crossing in range is +inf.
struct StabilityMargins {
  double gain_margin_db = 0.0;
  double phase_crossover_hz = 0.0;
  double phase_margin_deg = 0.0;
  double gain_crossover_hz = 0.0;
};
StabilityMargins margins(const TransferFunction& loop, double f_lo_hz = 1e-3, double f_hi_hz = 1e4);

}  // namespace sea
