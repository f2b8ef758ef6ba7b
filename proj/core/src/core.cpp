#include "qdm/core.hpp"

#include <algorithm>
#include <cmath>

namespace qdm {

Phase::Phase(double radians) {
  if (!std::isfinite(radians)) {
    throw std::domain_error("Phase: angle must be finite");
  }
  double r = std::fmod(radians, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;  // the += above can round onto 2*pi itself
  radians_ = r;
}

Phase wrap_phase(double radians) { return Phase(radians); }

double circular_distance(Phase a, Phase b) {
  const double d = std::abs(a.radians() - b.radians());
  return std::min(d, two_pi - d);
}

double wavenumber(double wavelength_m) {
  if (!std::isfinite(wavelength_m) || wavelength_m <= 0.0) {
    throw std::domain_error("wavenumber: wavelength must be positive and finite");
  }
  return two_pi / wavelength_m;
}

WaveConfig::WaveConfig(double wavelength_m)
    : wavelength_m_(wavelength_m), wavenumber_rad_per_m_(wavenumber(wavelength_m)) {}

ArrayConfig::ArrayConfig(const WaveConfig& wave, int n_elements)
    : ArrayConfig(wave, n_elements, 2.0 * wave.wavelength_m()) {}

ArrayConfig::ArrayConfig(const WaveConfig& wave, int n_elements, double aperture_m)
    : wave_(wave), n_elements_(n_elements), aperture_m_(aperture_m) {
  if (n_elements < 1) {
    throw std::domain_error("ArrayConfig: n_elements must be >= 1");
  }
  if (!std::isfinite(aperture_m) || aperture_m <= 0.0) {
    throw std::domain_error("ArrayConfig: aperture must be positive and finite");
  }
  spacing_m_ = aperture_m_ / n_elements_;
  positions_m_.reserve(static_cast<std::size_t>(n_elements_));
  for (int n = 1; n <= n_elements_; ++n) {
    // aperture * (n/N) rather than n * d: keeps the last element pinned to
    // the aperture exactly.
    positions_m_.push_back(aperture_m_ * (static_cast<double>(n) / n_elements_));
  }
}

double ArrayConfig::position_m(int element_index) const {
  if (element_index < 1 || element_index > n_elements_) {
    throw std::domain_error("ArrayConfig: element index out of range");
  }
  return positions_m_[static_cast<std::size_t>(element_index - 1)];
}

ReceiverPosition::ReceiverPosition(double x, double y) : x_m(x), y_m(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::domain_error("ReceiverPosition: coordinates must be finite");
  }
  if (!(range_from_origin_m() > 0.0)) {
    throw std::domain_error("ReceiverPosition: receiver must not sit at the origin");
  }
}

double ReceiverPosition::range_from_origin_m() const { return std::hypot(x_m, y_m); }

}  // namespace qdm
