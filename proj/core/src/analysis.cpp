#include "qdm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qdm/rng.hpp"

namespace qdm {

namespace {

// Salt separating the symbol-draw streams from the noise streams that run
// on the raw seed.
constexpr std::uint64_t kSymbolStreamSalt = 0x53594d424f4c5331ull;

constexpr double kPhaseDedupeTol = 1e-12;

double integrate_simpson(double lower, double upper, int intervals, auto&& f) {
  // intervals must be even
  const double h = (upper - lower) / intervals;
  double sum = f(lower) + f(upper);
  for (int i = 1; i < intervals; ++i) {
    sum += f(lower + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

struct StreamCounts {
  std::int64_t errors_axial = 0;
  std::int64_t errors_broadside = 0;
};

}  // namespace

int nearest_psk_index(Phase observed, const PskConfig& cfg) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m < cfg.order(); ++m) {
    const double dist = circular_distance(observed, psk_map(m, cfg));
    if (dist < best_dist) {  // strict: boundary ties keep the smaller index
      best_dist = dist;
      best = m;
    }
  }
  return best;
}

DemodResult coherent_demod_psk(std::complex<double> sample, const PskConfig& cfg,
                               Phase reference_phase) {
  if (!std::isfinite(sample.real()) || !std::isfinite(sample.imag())) {
    throw std::domain_error("coherent_demod_psk: sample must be finite");
  }
  const bool degenerate = sample == std::complex<double>{0.0, 0.0};
  // arg(0) == 0, so a degenerate sample demodulates as index 0
  const Phase observed(std::arg(sample) - reference_phase.radians());
  return DemodResult{nearest_psk_index(observed, cfg), degenerate};
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double theoretical_psk_ser(int order, double es_over_n0_db) {
  if (order < 2) {
    throw std::domain_error("theoretical_psk_ser: order must be >= 2");
  }
  if (std::isnan(es_over_n0_db)) {
    throw std::domain_error("theoretical_psk_ser: Es/N0 must not be NaN");
  }
  const double gamma = std::pow(10.0, es_over_n0_db / 10.0);
  if (order == 2) {
    return gaussian_q(std::sqrt(2.0 * gamma));
  }
  if (gamma == 0.0) {
    return static_cast<double>(order - 1) / order;  // uniform-guess limit
  }
  if (std::isinf(gamma)) {
    return 0.0;
  }
  const double sin2 = std::pow(std::sin(pi / order), 2);
  const double upper = pi * (order - 1) / order;
  const double ser = (1.0 / pi) * integrate_simpson(0.0, upper, 1 << 14, [&](double t) {
                       const double s = std::sin(t);
                       if (s == 0.0) return 0.0;
                       return std::exp(-gamma * sin2 / (s * s));
                     });
  return std::clamp(ser, 0.0, 1.0);
}

std::vector<SerPoint> ser_sweep(const ArrayConfig& array, const PskConfig& psk_axial,
                                const PskConfig& psk_broadside,
                                std::span<const double> snr_grid_db, std::int64_t n_symbols,
                                std::uint64_t seed, int n_threads) {
  if (n_symbols < 1) {
    throw std::domain_error("ser_sweep: n_symbols must be >= 1");
  }
  if (n_threads < 1) {
    throw std::domain_error("ser_sweep: n_threads must be >= 1");
  }
  const double es = psk_broadside.symbol_energy();
  const WaveConfig& wave = array.wave();
  const std::uint64_t mask_axial = static_cast<std::uint64_t>(psk_axial.order()) - 1;
  const std::uint64_t mask_broadside = static_cast<std::uint64_t>(psk_broadside.order()) - 1;

  std::vector<SerPoint> points;
  points.reserve(snr_grid_db.size());

  for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
    const NoiseModel noise(snr_grid_db[p], seed);

    auto count_range = [&](std::int64_t lo, std::int64_t hi, StreamCounts& counts) {
      for (std::int64_t i = lo; i < hi; ++i) {
        const std::uint64_t event =
            static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(n_symbols) +
            static_cast<std::uint64_t>(i);
        CounterRng sym_rng(seed ^ kSymbolStreamSalt, event);
        const int sym_axial = static_cast<int>(sym_rng.next_u64() & mask_axial);
        const int sym_broadside = static_cast<int>(sym_rng.next_u64() & mask_broadside);

        const TxAssignment tx =
            modulate_joint(sym_axial, sym_broadside, psk_axial, psk_broadside, array);
        const double x_element = array.position_m(tx.element_index);

        // The axial path phase K*x equals the phase-Doppler already folded
        // into achieved_axial_phase; only the residual rides on the gain.
        const Phase axial_path = plane_wave_gain(x_element, pi / 2.0, wave).phase;
        const ChannelGain gain_axial(1.0, axial_path - tx.achieved_phase_doppler);
        const ChannelGain gain_broadside = plane_wave_gain(x_element, 0.0, wave);

        const RxSamplePair rx =
            received_baseband(tx, es, gain_axial, gain_broadside, noise, event);

        const DemodResult dec_axial = coherent_demod_psk(rx.at_axial, psk_axial, gain_axial.phase);
        const DemodResult dec_broadside =
            coherent_demod_psk(rx.at_broadside, psk_broadside, gain_broadside.phase);
        counts.errors_axial += dec_axial.symbol_index != sym_axial;
        counts.errors_broadside += dec_broadside.symbol_index != sym_broadside;
      }
    };

    const int workers = static_cast<int>(
        std::min<std::int64_t>(n_threads, n_symbols));
    std::vector<StreamCounts> shard_counts(static_cast<std::size_t>(workers));
    if (workers == 1) {
      count_range(0, n_symbols, shard_counts[0]);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      const std::int64_t chunk = (n_symbols + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n_symbols);
        pool.emplace_back(count_range, lo, hi, std::ref(shard_counts[static_cast<std::size_t>(w)]));
      }
      for (auto& t : pool) t.join();
    }

    StreamCounts total;
    for (const StreamCounts& c : shard_counts) {
      total.errors_axial += c.errors_axial;
      total.errors_broadside += c.errors_broadside;
    }

    SerPoint point;
    point.es_over_n0_db = snr_grid_db[p];
    point.n_symbols = n_symbols;
    point.errors_rx = total.errors_axial;
    point.errors_ry = total.errors_broadside;
    point.ser_rx = static_cast<double>(total.errors_axial) / static_cast<double>(n_symbols);
    point.ser_ry = static_cast<double>(total.errors_broadside) / static_cast<double>(n_symbols);
    points.push_back(point);
  }
  return points;
}

std::vector<LeakagePoint> leakage_scan(const ArrayConfig& array, const PskConfig& psk_broadside,
                                       std::span<const double> theta_grid_rad, ChannelModel model,
                                       double probe_range_m) {
  if (model == ChannelModel::spherical &&
      (!std::isfinite(probe_range_m) || probe_range_m <= 0.0)) {
    throw std::domain_error("leakage_scan: probe range must be positive");
  }
  for (double theta : theta_grid_rad) {
    if (!std::isfinite(theta) || theta < 0.0 || theta > pi / 2.0) {
      throw std::domain_error("leakage_scan: theta must lie in [0, pi/2]");
    }
  }

  const WaveConfig& wave = array.wave();
  const int n = array.n_elements();
  // Axial symbols only drive the hopping; use the broadside order for them.
  const PskConfig psk_axial(psk_broadside.order(), psk_broadside.symbol_energy());
  const double amp = std::sqrt(psk_broadside.symbol_energy());

  std::vector<LeakagePoint> points;
  points.reserve(theta_grid_rad.size());
  for (double theta : theta_grid_rad) {
    std::vector<double> path_phase(static_cast<std::size_t>(n));
    if (model == ChannelModel::plane) {
      for (int e = 1; e <= n; ++e) {
        path_phase[static_cast<std::size_t>(e - 1)] =
            plane_wave_path_phase(array.position_m(e), theta, wave);
      }
    } else {
      const ReceiverPosition probe(probe_range_m * std::sin(theta),
                                   probe_range_m * std::cos(theta));
      for (int e = 1; e <= n; ++e) {
        path_phase[static_cast<std::size_t>(e - 1)] =
            spherical_path_phase(array.position_m(e), probe, wave);
      }
    }
    const auto [lo, hi] = std::minmax_element(path_phase.begin(), path_phase.end());

    // Exhaustive noiseless decode of the broadside stream at the probe;
    // uniform symbol pairs make the exhaustive average exact.
    std::int64_t errors = 0;
    for (int sym_axial = 0; sym_axial < psk_axial.order(); ++sym_axial) {
      for (int sym_b = 0; sym_b < psk_broadside.order(); ++sym_b) {
        const TxAssignment tx =
            modulate_joint(sym_axial, sym_b, psk_axial, psk_broadside, array);
        const double rx_phase = tx.source_phase.radians() +
                                path_phase[static_cast<std::size_t>(tx.element_index - 1)];
        const DemodResult dec =
            coherent_demod_psk(std::polar(amp, rx_phase), psk_broadside, Phase{});
        errors += dec.symbol_index != sym_b;
      }
    }
    const double total =
        static_cast<double>(psk_axial.order()) * static_cast<double>(psk_broadside.order());

    LeakagePoint point;
    point.theta_rad = theta;
    point.phase_spread_rad = *hi - *lo;
    point.ser_y = static_cast<double>(errors) / total;
    points.push_back(point);
  }
  return points;
}

QuantizationReport quantization_report(const ArrayConfig& array,
                                       std::span<const double> target_phases_rad) {
  if (target_phases_rad.empty()) {
    throw std::domain_error("quantization_report: need at least one target phase");
  }

  // Distinct achievable phases (circular dedupe).
  std::vector<double> achievable;
  achievable.reserve(static_cast<std::size_t>(array.n_elements()));
  for (int e = 1; e <= array.n_elements(); ++e) {
    achievable.push_back(
        phase_doppler_of_position(array.position_m(e), array.wave()).radians());
  }
  std::sort(achievable.begin(), achievable.end());
  std::vector<double> distinct;
  for (double phase : achievable) {
    if (distinct.empty() || phase - distinct.back() > kPhaseDedupeTol) {
      distinct.push_back(phase);
    }
  }
  if (distinct.size() > 1 &&
      two_pi - distinct.back() + distinct.front() <= kPhaseDedupeTol) {
    distinct.pop_back();  // last phase aliases the first across the wrap
  }

  double max_gap = two_pi;
  if (distinct.size() > 1) {
    max_gap = two_pi - distinct.back() + distinct.front();
    for (std::size_t i = 1; i < distinct.size(); ++i) {
      max_gap = std::max(max_gap, distinct[i] - distinct[i - 1]);
    }
  }
  const double error_bound = max_gap / 2.0;

  QuantizationReport report;
  report.n_distinct_phases = static_cast<int>(distinct.size());

  constexpr int kBins = 16;
  report.histogram.resize(kBins);
  const double bin_span = std::max(error_bound, 1e-15);
  for (int b = 0; b < kBins; ++b) {
    report.histogram[static_cast<std::size_t>(b)].upper_edge_rad = bin_span * (b + 1) / kBins;
  }

  double sum_error = 0.0;
  for (double target : target_phases_rad) {
    const double err = select_element(Phase(target), array).quantization_error_rad;
    report.max_error_rad = std::max(report.max_error_rad, err);
    sum_error += err;
    int bin = static_cast<int>(err / bin_span * kBins);
    bin = std::clamp(bin, 0, kBins - 1);
    ++report.histogram[static_cast<std::size_t>(bin)].count;
  }
  report.mean_error_rad = sum_error / static_cast<double>(target_phases_rad.size());
  return report;
}

QuantizationReport quantization_report(const ArrayConfig& array, int psk_order) {
  const PskConfig cfg(psk_order, 1.0);
  std::vector<double> targets(static_cast<std::size_t>(psk_order));
  for (int m = 0; m < psk_order; ++m) {
    targets[static_cast<std::size_t>(m)] = psk_map(m, cfg).radians();
  }
  return quantization_report(array, targets);
}

}  // namespace qdm
