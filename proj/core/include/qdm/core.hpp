#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qdm {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angle canonicalized to [0, 2*pi) radians. Construction wraps the input
/// onto that branch; non-finite input is rejected with std::domain_error.
class Phase {
 public:
  Phase() = default;
  explicit Phase(double radians);

  double radians() const { return radians_; }

 private:
  double radians_ = 0.0;
};

/// Canonicalizes an angle to [0, 2*pi). Idempotent.
Phase wrap_phase(double radians);

/// Shortest-arc distance between two phases, in [0, pi].
double circular_distance(Phase a, Phase b);

inline Phase operator+(Phase a, Phase b) { return Phase(a.radians() + b.radians()); }
inline Phase operator-(Phase a, Phase b) { return Phase(a.radians() - b.radians()); }

/// K = 2*pi / wavelength, in rad/m. Throws std::domain_error unless
/// wavelength > 0 and finite.
double wavenumber(double wavelength_m);

/// Carrier wavelength with its derived wavenumber.
class WaveConfig {
 public:
  explicit WaveConfig(double wavelength_m);

  double wavelength_m() const { return wavelength_m_; }
  double wavenumber_rad_per_m() const { return wavenumber_rad_per_m_; }

 private:
  double wavelength_m_;
  double wavenumber_rad_per_m_;
};

/// Uniform linear array on the x-axis: N elements at x_n = n * d for
/// n = 1..N with d = aperture / N. No element sits at the origin and the
/// last element sits exactly at the aperture.
class ArrayConfig {
 public:
  /// Aperture defaults to two wavelengths.
  ArrayConfig(const WaveConfig& wave, int n_elements);
  ArrayConfig(const WaveConfig& wave, int n_elements, double aperture_m);

  const WaveConfig& wave() const { return wave_; }
  int n_elements() const { return n_elements_; }
  double aperture_m() const { return aperture_m_; }
  double spacing_m() const { return spacing_m_; }

  /// Element positions in meters, ascending; index i holds element i + 1.
  const std::vector<double>& positions_m() const { return positions_m_; }

  /// 1-based element position. Throws std::domain_error if out of range.
  double position_m(int element_index) const;

 private:
  WaveConfig wave_;
  int n_elements_;
  double aperture_m_;
  double spacing_m_;
  std::vector<double> positions_m_;
};

/// Receiver location in the array plane (array on the x-axis, origin at
/// x = 0). Must not coincide with the origin.
struct ReceiverPosition {
  ReceiverPosition(double x, double y);

  double x_m;
  double y_m;

  double range_from_origin_m() const;
};

}  // namespace qdm
