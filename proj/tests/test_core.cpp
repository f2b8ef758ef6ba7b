#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "qdm/core.hpp"

using namespace qdm;

TEST_CASE("wavenumber matches 2*pi/lambda") {
  CHECK(wavenumber(1.0) == doctest::Approx(two_pi).epsilon(1e-12));
  CHECK(wavenumber(0.5) == doctest::Approx(4.0 * pi).epsilon(1e-12));
  CHECK(wavenumber(0.1) == doctest::Approx(20.0 * pi).epsilon(1e-12));
}

TEST_CASE("wavenumber rejects bad wavelengths") {
  CHECK_THROWS_AS(wavenumber(0.0), std::domain_error);
  CHECK_THROWS_AS(wavenumber(-1.0), std::domain_error);
  CHECK_THROWS_AS(wavenumber(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(wavenumber(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("wavenumber * wavelength = 2*pi over six decades") {
  for (double lambda = 1e-3; lambda <= 1e3 + 1e-9; lambda *= 10.0) {
    const double rel = std::abs(wavenumber(lambda) * lambda - two_pi) / two_pi;
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("wrap_phase moves notable angles onto the canonical branch") {
  CHECK(wrap_phase(two_pi).radians() == 0.0);
  CHECK(wrap_phase(-pi / 2.0).radians() == doctest::Approx(3.0 * pi / 2.0).epsilon(1e-12));
  CHECK(wrap_phase(5.0 * pi).radians() == doctest::Approx(pi).epsilon(1e-12));
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("wrap_phase is idempotent and always lands in [0, 2*pi)") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> angles(-100.0, 100.0);
  for (int i = 0; i < 100000; ++i) {
    const Phase wrapped = wrap_phase(angles(gen));
    CHECK(wrapped.radians() >= 0.0);
    CHECK(wrapped.radians() < two_pi);
    CHECK(wrap_phase(wrapped.radians()).radians() == wrapped.radians());
  }
}

TEST_CASE("circular distance takes the short way around") {
  CHECK(circular_distance(Phase(0.1), Phase(two_pi - 0.1)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(circular_distance(Phase(0.0), Phase(pi)) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(circular_distance(Phase(1.0), Phase(1.0)) == 0.0);
}

TEST_CASE("element positions follow x_n = n * aperture / N") {
  const ArrayConfig array(WaveConfig(1.0), 4, 2.0);
  REQUIRE(array.positions_m().size() == 4);
  CHECK(array.positions_m()[0] == 0.5);
  CHECK(array.positions_m()[1] == 1.0);
  CHECK(array.positions_m()[2] == 1.5);
  CHECK(array.positions_m()[3] == 2.0);
  CHECK(array.spacing_m() == 0.5);

  const ArrayConfig single(WaveConfig(1.0), 1, 2.0);
  CHECK(single.positions_m() == std::vector<double>{2.0});

  const ArrayConfig small(WaveConfig(0.1), 16, 0.2);
  CHECK(small.positions_m().front() == doctest::Approx(0.0125).epsilon(1e-12));
}

TEST_CASE("array aperture defaults to two wavelengths") {
  const ArrayConfig array(WaveConfig(0.25), 8);
  CHECK(array.aperture_m() == 0.5);
}

TEST_CASE("array positions are positive, increasing, and bounded by the aperture") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> lambdas(1e-3, 10.0);
  std::uniform_int_distribution<int> sizes(1, 200);
  for (int trial = 0; trial < 200; ++trial) {
    const double lambda = lambdas(gen);
    const int n = sizes(gen);
    const ArrayConfig array(WaveConfig(lambda), n);
    const auto& xs = array.positions_m();
    REQUIRE(static_cast<int>(xs.size()) == n);
    CHECK(std::abs(xs.back() - array.aperture_m()) <= 1e-12 * array.aperture_m());
    CHECK(std::abs(xs.front() - array.aperture_m() / n) <= 1e-12 * array.aperture_m());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(xs[i] > 0.0);
      CHECK(xs[i] <= array.aperture_m() * (1.0 + 1e-12));
      if (i > 0) {
        CHECK(xs[i] > xs[i - 1]);
        CHECK(std::abs((xs[i] - xs[i - 1]) - array.spacing_m()) <= 1e-12 * array.aperture_m());
      }
    }
  }
}

TEST_CASE("array construction validates its inputs") {
  CHECK_THROWS_AS(ArrayConfig(WaveConfig(1.0), 0), std::domain_error);
  CHECK_THROWS_AS(ArrayConfig(WaveConfig(1.0), 4, 0.0), std::domain_error);
  CHECK_THROWS_AS(ArrayConfig(WaveConfig(1.0), 4, -2.0), std::domain_error);
  const ArrayConfig array(WaveConfig(1.0), 4);
  CHECK_THROWS_AS(array.position_m(0), std::domain_error);
  CHECK_THROWS_AS(array.position_m(5), std::domain_error);
}

TEST_CASE("receiver must not sit at the origin") {
  CHECK_THROWS_AS(ReceiverPosition(0.0, 0.0), std::domain_error);
  const ReceiverPosition rx(3.0, 4.0);
  CHECK(rx.range_from_origin_m() == doctest::Approx(5.0));
}
