#include "qdm/doppler.hpp"

#include <algorithm>
#include <cmath>

#include "qdm/fft.hpp"
#include "qdm/modulation.hpp"

namespace qdm {

SweepConfig::SweepConfig(const ArrayConfig& array, double residence_time_s, int oversample,
                         int repeats)
    : array_(array), residence_time_s_(residence_time_s), oversample_(oversample),
      repeats_(repeats) {
  if (!std::isfinite(residence_time_s) || residence_time_s <= 0.0) {
    throw std::domain_error("SweepConfig: residence time must be positive and finite");
  }
  if (oversample < 2) {
    throw std::domain_error("SweepConfig: oversample must be >= 2");
  }
  if (repeats < 1) {
    throw std::domain_error("SweepConfig: repeats must be >= 1");
  }
  if (total_samples() > (std::size_t{1} << 28)) {
    throw std::domain_error("SweepConfig: total sample count too large");
  }
}

std::size_t SweepConfig::total_samples() const {
  return static_cast<std::size_t>(array_.n_elements()) * static_cast<std::size_t>(oversample_) *
         static_cast<std::size_t>(repeats_);
}

std::vector<int> dwell_elements(const SweepConfig& cfg) {
  const int n = cfg.array().n_elements();
  std::vector<int> elements(static_cast<std::size_t>(n) * cfg.repeats());
  for (std::size_t m = 0; m < elements.size(); ++m) {
    elements[m] = static_cast<int>(m % static_cast<std::size_t>(n)) + 1;
  }
  return elements;
}

SweepWaveform stepped_sweep_waveform(const SweepConfig& cfg) {
  const ArrayConfig& array = cfg.array();
  SweepWaveform w;
  w.sample_rate_hz = cfg.sample_rate_hz();
  w.emulated_speed_m_per_s = cfg.emulated_speed_m_per_s();
  w.wavelength_m = array.wave().wavelength_m();
  w.aliasing_flagged = array.wave().wavenumber_rad_per_m() * array.spacing_m() >= pi;
  w.samples.reserve(cfg.total_samples());
  const std::vector<int> elements = dwell_elements(cfg);
  for (int element : elements) {
    const Phase dwell_phase = phase_doppler_of_position(array.position_m(element), array.wave());
    const std::complex<double> sample = std::polar(1.0, dwell_phase.radians());
    for (int k = 0; k < cfg.oversample(); ++k) w.samples.push_back(sample);
  }
  return w;
}

SweepWaveform ideal_doppler_waveform(double v_x_m_per_s, const WaveConfig& wave,
                                     double sample_rate_hz, int n_samples) {
  if (!std::isfinite(v_x_m_per_s)) {
    throw std::domain_error("ideal_doppler_waveform: speed must be finite");
  }
  if (!std::isfinite(sample_rate_hz) || sample_rate_hz <= 0.0) {
    throw std::domain_error("ideal_doppler_waveform: sample rate must be positive");
  }
  if (n_samples < 1) {
    throw std::domain_error("ideal_doppler_waveform: need at least one sample");
  }
  const double shift_hz = std::abs(v_x_m_per_s) / wave.wavelength_m();
  if (sample_rate_hz <= 2.0 * shift_hz) {
    throw std::domain_error("ideal_doppler_waveform: sample rate violates Nyquist");
  }
  SweepWaveform w;
  w.sample_rate_hz = sample_rate_hz;
  w.emulated_speed_m_per_s = v_x_m_per_s;
  w.wavelength_m = wave.wavelength_m();
  w.samples.resize(static_cast<std::size_t>(n_samples));
  const double phase_step = wave.wavenumber_rad_per_m() * v_x_m_per_s / sample_rate_hz;
  for (int i = 0; i < n_samples; ++i) {
    w.samples[static_cast<std::size_t>(i)] = std::polar(1.0, phase_step * i);
  }
  return w;
}

DopplerEstimate estimate_doppler_shift(const SweepWaveform& waveform, int fft_length) {
  if (waveform.samples.empty()) {
    throw std::domain_error("estimate_doppler_shift: empty waveform");
  }
  if (fft_length < 1 || static_cast<std::size_t>(fft_length) < waveform.samples.size()) {
    throw std::domain_error("estimate_doppler_shift: fft_length must cover the waveform");
  }
  const std::size_t len = next_pow2(static_cast<std::size_t>(fft_length));
  std::vector<std::complex<double>> spectrum(len, std::complex<double>{0.0, 0.0});
  std::copy(waveform.samples.begin(), waveform.samples.end(), spectrum.begin());
  fft_in_place(spectrum);

  std::size_t peak = 0;
  double peak_power = -1.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double power = std::norm(spectrum[k]);
    if (power > peak_power) {  // strict: equal-power ties keep the lowest bin
      peak_power = power;
      peak = k;
    }
  }

  const double bin_width = waveform.sample_rate_hz / static_cast<double>(len);
  const double signed_bin = (peak <= len / 2)
                                ? static_cast<double>(peak)
                                : static_cast<double>(peak) - static_cast<double>(len);
  DopplerEstimate est;
  est.shift_hz = signed_bin * bin_width;
  est.bin_width_hz = bin_width;
  est.expected_hz = waveform.emulated_speed_m_per_s / waveform.wavelength_m;
  return est;
}

double convergence_gap(const ArrayConfig& array) {
  return array.wave().wavenumber_rad_per_m() * array.spacing_m();
}

}  // namespace qdm
