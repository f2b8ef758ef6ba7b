#pragma once

#include <complex>
#include <vector>

#include "qdm/core.hpp"

namespace qdm {

/// Timing of the element-switching sweep: the source dwells on each
/// element for residence_time_s, visiting 1..N cyclically `repeats`
/// times, sampled `oversample` times per dwell.
class SweepConfig {
 public:
  SweepConfig(const ArrayConfig& array, double residence_time_s, int oversample, int repeats);

  const ArrayConfig& array() const { return array_; }
  double residence_time_s() const { return residence_time_s_; }
  int oversample() const { return oversample_; }
  int repeats() const { return repeats_; }

  double emulated_speed_m_per_s() const { return array_.spacing_m() / residence_time_s_; }
  double sample_rate_hz() const { return oversample_ / residence_time_s_; }
  std::size_t total_samples() const;

 private:
  ArrayConfig array_;
  double residence_time_s_;
  int oversample_;
  int repeats_;
};

/// Sampled complex baseband series with its timing metadata.
struct SweepWaveform {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;
  double emulated_speed_m_per_s = 0.0;
  double wavelength_m = 0.0;
  /// Set when the per-dwell phase step K*d reaches pi, which makes the
  /// emulated shift frequency ambiguous. The waveform is still produced.
  bool aliasing_flagged = false;
};

/// Frequency-shift estimate from a periodogram peak.
struct DopplerEstimate {
  double shift_hz = 0.0;
  double bin_width_hz = 0.0;
  double expected_hz = 0.0;  // v_x / wavelength
};

/// 1-based element index occupied during each dwell (cyclic 1..N).
std::vector<int> dwell_elements(const SweepConfig& cfg);

/// Piecewise-constant emulation of a transmitter moving along the array at
/// v_x = d/T: dwell m carries unit-amplitude phase K * x_(m mod N + 1).
SweepWaveform stepped_sweep_waveform(const SweepConfig& cfg);

/// Continuous reference the sweep emulates: samples[i] = e^(j*K*v_x*i/Fs).
/// Throws std::domain_error when the sample rate violates Nyquist for the
/// shift v_x / wavelength.
SweepWaveform ideal_doppler_waveform(double v_x_m_per_s, const WaveConfig& wave,
                                     double sample_rate_hz, int n_samples);

/// Peak of the zero-padded periodogram, reported as a signed frequency in
/// (-Fs/2, Fs/2]. fft_length must cover the waveform and is rounded up to
/// the next power of two; the reported bin width uses the rounded length.
DopplerEstimate estimate_doppler_shift(const SweepWaveform& waveform, int fft_length);

/// Maximum instantaneous phase discrepancy K * d between the stepped sweep
/// and the continuous waveform it emulates at equal speed. Shrinks
/// linearly as the element spacing goes to zero.
double convergence_gap(const ArrayConfig& array);

}  // namespace qdm
