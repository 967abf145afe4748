#include "sea/ident.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "sea/errors.hpp"

namespace sea {

namespace {

const double kHalfPowerDb = 10.0 * std::log10(2.0);

double interp_log(double f0, double f1, double y0, double y1, double f) {
  const double w = std::log(f / f0) / std::log(f1 / f0);
  return y0 + w * (y1 - y0);
}

}  // namespace

FrfEstimate estimate_frf(std::span<const double> input, std::span<const double> output, double dt_s,
                         std::span<const double> freqs_hz, const WelchOptions& opts) {
  if (input.size() != output.size()) throw ValidationError("estimate_frf: input and output lengths differ");
  if (!(dt_s > 0.0)) throw ValidationError("estimate_frf: dt must be positive");
  if (freqs_hz.empty()) throw ValidationError("estimate_frf: empty frequency grid");
  if (opts.segments < 8) throw ValidationError("estimate_frf: at least 8 segments are required");
  const double f_min = *std::min_element(freqs_hz.begin(), freqs_hz.end());
  if (!(f_min > 0.0)) throw ValidationError("estimate_frf: frequencies must be positive");
  const std::size_t n = input.size();
  if (static_cast<double>(n) * dt_s < 2.0 / f_min) {
    throw ValidationError("estimate_frf: record shorter than two periods of the lowest frequency");
  }
  const std::size_t seg_len = 2 * n / static_cast<std::size_t>(opts.segments + 1);
  const std::size_t hop = seg_len / 2;
  if (seg_len < 4) throw ValidationError("estimate_frf: record too short for the segment count");

  std::vector<double> window(seg_len);
  for (std::size_t i = 0; i < seg_len; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(seg_len)));
  }

  FrfEstimate est;
  est.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
  std::vector<double> xu(seg_len);
  std::vector<double> xy(seg_len);
  std::vector<std::complex<double>> h(freqs_hz.size());
  for (std::size_t fi = 0; fi < freqs_hz.size(); ++fi) {
    const double w = 2.0 * std::numbers::pi * freqs_hz[fi] * dt_s;
    const std::complex<double> rot(std::cos(w), -std::sin(w));
    double suu = 0.0;
    double syy = 0.0;
    std::complex<double> suy(0.0, 0.0);
    for (int s = 0; s < opts.segments; ++s) {
      const std::size_t start = static_cast<std::size_t>(s) * hop;
      double mu = 0.0;
      double my = 0.0;
      for (std::size_t i = 0; i < seg_len; ++i) {
        mu += input[start + i];
        my += output[start + i];
      }
      mu /= static_cast<double>(seg_len);
      my /= static_cast<double>(seg_len);
      std::complex<double> X(0.0, 0.0);
      std::complex<double> Y(0.0, 0.0);
      std::complex<double> ph(1.0, 0.0);
      for (std::size_t i = 0; i < seg_len; ++i) {
        const double wi = window[i];
        X += (wi * (input[start + i] - mu)) * ph;
        Y += (wi * (output[start + i] - my)) * ph;
        ph *= rot;
        if ((i & 1023u) == 1023u) ph /= std::abs(ph);
      }
      suu += std::norm(X);
      syy += std::norm(Y);
      suy += std::conj(X) * Y;
    }
    if (!(suu > 0.0)) throw NumericalError("estimate_frf: no input power at a requested frequency");
    h[fi] = suy / suu;
    est.magnitude_db.push_back(20.0 * std::log10(std::abs(h[fi])));
    est.coherence.push_back(syy > 0.0 ? std::clamp(std::norm(suy) / (suu * syy), 0.0, 1.0) : 0.0);
  }
  double unwrapped = 0.0;
  double prev = 0.0;
  for (std::size_t fi = 0; fi < h.size(); ++fi) {
    const double raw = std::arg(h[fi]) * 180.0 / std::numbers::pi;
    if (fi == 0) {
      unwrapped = raw;
    } else {
      double step = std::fmod(raw - prev + 180.0, 360.0);
      if (step < 0.0) step += 360.0;
      unwrapped += step - 180.0;
    }
    prev = raw;
    est.phase_deg.push_back(unwrapped);
  }
  return est;
}

double bandwidth_3db(const FrequencyResponse& fr, DbReference ref) {
  if (fr.freqs_hz.size() < 2) throw ValidationError("bandwidth_3db: need at least two grid points");
  const double ref_db = ref == DbReference::kDcGain ? fr.magnitude_db.front() : 0.0;
  const double target = ref_db - kHalfPowerDb;
  for (std::size_t i = 1; i < fr.freqs_hz.size(); ++i) {
    if (fr.magnitude_db[i] < target) {
      const double f0 = fr.freqs_hz[i - 1];
      const double f1 = fr.freqs_hz[i];
      const double m0 = fr.magnitude_db[i - 1];
      const double m1 = fr.magnitude_db[i];
      const double w = (m0 - target) / (m0 - m1);
      return f0 * std::pow(f1 / f0, w);
    }
  }
  throw NumericalError("bandwidth_3db: magnitude never crosses the -3 dB level in range");
}

double bandwidth_3db(const TransferFunction& tf, DbReference ref, double f_lo_hz, double f_hi_hz) {
  const double ref_db = ref == DbReference::kDcGain ? 20.0 * std::log10(std::abs(tf.dc_gain())) : 0.0;
  const double target = ref_db - kHalfPowerDb;
  const auto mag_db = [&](double f) { return 20.0 * std::log10(std::abs(tf.evaluate(2.0 * std::numbers::pi * f))); };
  const int decades = static_cast<int>(std::ceil(std::log10(f_hi_hz / f_lo_hz)));
  const auto grid = logspace_hz(f_lo_hz, f_hi_hz, 200 * std::max(decades, 1) + 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (mag_db(grid[i]) < target) {
      double lo = grid[i - 1];
      double hi = grid[i];
      for (int it = 0; it < 80 && hi / lo - 1.0 > 1e-13; ++it) {
        const double mid = std::sqrt(lo * hi);
        (mag_db(mid) < target ? hi : lo) = mid;
      }
      return std::sqrt(lo * hi);
    }
  }
  throw NumericalError("bandwidth_3db: magnitude never crosses the -3 dB level in range");
}

double phase_at(const FrequencyResponse& fr, double f_hz) {
  const auto& f = fr.freqs_hz;
  if (f.empty() || f_hz < f.front() || f_hz > f.back()) throw ValidationError("phase_at: frequency out of range");
  if (f.size() == 1) return fr.phase_deg.front();
  const auto it = std::upper_bound(f.begin(), f.end(), f_hz);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - f.begin()), f.size() - 1);
  const std::size_t lo = hi - 1;
  return interp_log(f[lo], f[hi], fr.phase_deg[lo], fr.phase_deg[hi], f_hz);
}

double phase_at(const TransferFunction& tf, double f_hz) {
  if (!(f_hz > 0.0)) throw ValidationError("phase_at: frequency must be positive");
  const auto grid = logspace_hz(f_hz * 1e-4, f_hz, 801);
  return frequency_response(tf, grid).phase_deg.back();
}

StabilityMargins margins(const TransferFunction& loop, double f_lo_hz, double f_hi_hz) {
  const int decades = static_cast<int>(std::ceil(std::log10(f_hi_hz / f_lo_hz)));
  const FrequencyResponse fr = frequency_response(loop, logspace_hz(f_lo_hz, f_hi_hz, 200 * std::max(decades, 1) + 1));
  StabilityMargins m;
  m.gain_margin_db = std::numeric_limits<double>::infinity();
  m.phase_margin_deg = std::numeric_limits<double>::infinity();
  const auto& f = fr.freqs_hz;
  const auto& mag = fr.magnitude_db;
  const auto& ph = fr.phase_deg;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (std::isinf(m.phase_margin_deg) && (mag[i - 1] >= 0.0) != (mag[i] >= 0.0)) {
      const double w = mag[i - 1] / (mag[i - 1] - mag[i]);
      m.gain_crossover_hz = f[i - 1] * std::pow(f[i] / f[i - 1], w);
      const double phase = ph[i - 1] + w * (ph[i] - ph[i - 1]);
      m.phase_margin_deg = std::remainder(180.0 + phase, 360.0);
    }
    if (std::isinf(m.gain_margin_db)) {
      // Crossing of an odd multiple of -180 degrees.
      const double k0 = std::floor((ph[i - 1] - 180.0) / 360.0);
      const double k1 = std::floor((ph[i] - 180.0) / 360.0);
      if (k0 != k1) {
        const double level = 360.0 * std::max(k0, k1) + 180.0;
        const double w = (ph[i - 1] - level) / (ph[i - 1] - ph[i]);
        m.phase_crossover_hz = f[i - 1] * std::pow(f[i] / f[i - 1], w);
        m.gain_margin_db = -(mag[i - 1] + w * (mag[i] - mag[i - 1]));
      }
    }
  }
  return m;
}

}  // namespace sea
