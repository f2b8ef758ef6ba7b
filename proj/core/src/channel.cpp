#include "qdm/channel.hpp"

#include <cmath>
#include <limits>

#include "qdm/rng.hpp"

namespace qdm {

ChannelGain::ChannelGain(double amplitude_in, Phase phase_in)
    : amplitude(amplitude_in), phase(phase_in) {
  if (!std::isfinite(amplitude_in) || amplitude_in < 0.0) {
    throw std::domain_error("ChannelGain: amplitude must be finite and >= 0");
  }
}

NoiseModel::NoiseModel(double es_over_n0_db, std::uint64_t seed)
    : es_over_n0_db_(es_over_n0_db), seed_(seed) {
  if (std::isnan(es_over_n0_db) || es_over_n0_db == -std::numeric_limits<double>::infinity()) {
    throw std::domain_error("NoiseModel: Es/N0 must be finite or +inf");
  }
}

NoiseModel NoiseModel::disabled(std::uint64_t seed) {
  return NoiseModel(std::numeric_limits<double>::infinity(), seed);
}

bool NoiseModel::is_disabled() const { return std::isinf(es_over_n0_db_); }

double NoiseModel::noise_density(double es) const {
  if (is_disabled()) return 0.0;
  return es / std::pow(10.0, es_over_n0_db_ / 10.0);
}

double plane_wave_path_phase(double x_element_m, double theta_rad, const WaveConfig& wave) {
  if (!std::isfinite(x_element_m)) {
    throw std::domain_error("plane_wave_path_phase: element position must be finite");
  }
  if (!std::isfinite(theta_rad) || std::abs(theta_rad) > pi / 2.0) {
    throw std::domain_error("plane_wave_path_phase: theta must lie in [-pi/2, pi/2]");
  }
  return wave.wavenumber_rad_per_m() * x_element_m * std::sin(theta_rad);
}

ChannelGain plane_wave_gain(double x_element_m, double theta_rad, const WaveConfig& wave) {
  return ChannelGain(1.0, Phase(plane_wave_path_phase(x_element_m, theta_rad, wave)));
}

double spherical_path_phase(double x_element_m, const ReceiverPosition& rx,
                            const WaveConfig& wave) {
  if (!std::isfinite(x_element_m)) {
    throw std::domain_error("spherical_path_phase: element position must be finite");
  }
  const double r = std::hypot(rx.x_m - x_element_m, rx.y_m);
  if (!(r > 0.0)) {
    throw std::domain_error("spherical_path_phase: receiver coincides with the element");
  }
  const double r_origin = rx.range_from_origin_m();
  return -wave.wavenumber_rad_per_m() * (r - r_origin);
}

ChannelGain spherical_gain(double x_element_m, const ReceiverPosition& rx,
                           const WaveConfig& wave, bool normalize_amplitude) {
  const double phase = spherical_path_phase(x_element_m, rx, wave);
  double amplitude = 1.0;
  if (!normalize_amplitude) {
    const double r = std::hypot(rx.x_m - x_element_m, rx.y_m);
    amplitude = rx.range_from_origin_m() / r;
  }
  return ChannelGain(amplitude, Phase(phase));
}

std::complex<double> add_awgn(std::complex<double> sample, double es, const NoiseModel& noise,
                              std::uint64_t draw_index) {
  if (!std::isfinite(es) || es <= 0.0) {
    throw std::domain_error("add_awgn: symbol energy must be positive and finite");
  }
  if (noise.is_disabled()) return sample;
  CounterRng rng(noise.seed(), draw_index);
  return sample + rng.next_complex_gaussian(noise.noise_density(es));
}

RxSamplePair received_baseband(const TxAssignment& tx, double es, const ChannelGain& gain_axial,
                               const ChannelGain& gain_broadside, const NoiseModel& noise,
                               std::uint64_t draw_index) {
  if (!std::isfinite(es) || es <= 0.0) {
    throw std::domain_error("received_baseband: symbol energy must be positive and finite");
  }
  const double amp = std::sqrt(es);
  std::complex<double> axial = std::polar(
      gain_axial.amplitude * amp, (tx.achieved_axial_phase + gain_axial.phase).radians());
  std::complex<double> broadside = std::polar(
      gain_broadside.amplitude * amp, (tx.source_phase + gain_broadside.phase).radians());
  axial = add_awgn(axial, es, noise, 2 * draw_index);
  broadside = add_awgn(broadside, es, noise, 2 * draw_index + 1);
  return RxSamplePair{axial, broadside};
}

}  // namespace qdm
