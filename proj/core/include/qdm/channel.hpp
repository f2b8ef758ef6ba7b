#pragma once

#include <complex>
#include <cstdint>

#include "qdm/core.hpp"
#include "qdm/modulation.hpp"

namespace qdm {

/// Complex gain of one line-of-sight path, split into amplitude and phase.
struct ChannelGain {
  ChannelGain(double amplitude, Phase phase);

  double amplitude;
  Phase phase;

  std::complex<double> as_complex() const { return std::polar(amplitude, phase.radians()); }
};

/// Per-symbol SNR plus the seed of the deterministic noise stream.
/// An infinite Es/N0 disables the noise entirely.
class NoiseModel {
 public:
  NoiseModel(double es_over_n0_db, std::uint64_t seed);

  static NoiseModel disabled(std::uint64_t seed = 0);

  bool is_disabled() const;
  double es_over_n0_db() const { return es_over_n0_db_; }
  std::uint64_t seed() const { return seed_; }

  /// N0 for a given symbol energy: es / 10^(dB/10). Zero when disabled.
  double noise_density(double es) const;

 private:
  double es_over_n0_db_;
  std::uint64_t seed_;
};

/// Baseband samples seen by the two receivers for one symbol.
struct RxSamplePair {
  std::complex<double> at_axial;      // receiver on the array axis
  std::complex<double> at_broadside;  // receiver perpendicular to it
};

/// Unwrapped plane-wave path phase K * x * sin(theta) for an element at x,
/// theta measured from broadside (the y-axis). Requires |theta| <= pi/2.
double plane_wave_path_phase(double x_element_m, double theta_rad, const WaveConfig& wave);

/// Plane-wave channel gain: unit amplitude, phase = K * x * sin(theta).
/// Broadside (theta = 0) sees phase exactly 0 regardless of the element.
ChannelGain plane_wave_gain(double x_element_m, double theta_rad, const WaveConfig& wave);

/// Unwrapped exact path phase -K * (r - r_origin), referenced to the
/// origin-to-receiver path. Throws if the receiver coincides with the
/// element.
double spherical_path_phase(double x_element_m, const ReceiverPosition& rx,
                            const WaveConfig& wave);

/// Exact spherical-wave gain. Amplitude is 1 when normalized, else the
/// free-space ratio r_origin / r.
ChannelGain spherical_gain(double x_element_m, const ReceiverPosition& rx,
                           const WaveConfig& wave, bool normalize_amplitude = true);

/// Adds circularly symmetric complex Gaussian noise of total variance
/// N0 = es / 10^(dB/10). The draw is a pure function of the model's seed
/// and draw_index: equal inputs give bit-identical samples.
std::complex<double> add_awgn(std::complex<double> sample, double es, const NoiseModel& noise,
                              std::uint64_t draw_index);

/// Assembles the two received samples for one transmitted symbol. The
/// gains are the static channel responses on top of the modulated phases
/// (the element-dependent axial phase is already inside the assignment).
/// The two receivers use independent noise sub-draws 2k and 2k+1 of draw k.
RxSamplePair received_baseband(const TxAssignment& tx, double es, const ChannelGain& gain_axial,
                               const ChannelGain& gain_broadside, const NoiseModel& noise,
                               std::uint64_t draw_index);

}  // namespace qdm
