#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qdm/channel.hpp"
#include "qdm/core.hpp"
#include "qdm/modulation.hpp"

namespace qdm {

/// One measured point of a symbol-error-rate sweep. rx is the axial
/// receiver, ry the broadside one; ser = errors / n_symbols exactly.
struct SerPoint {
  double es_over_n0_db = 0.0;
  double ser_rx = 0.0;
  double ser_ry = 0.0;
  std::int64_t n_symbols = 0;
  std::int64_t errors_rx = 0;
  std::int64_t errors_ry = 0;
};

/// Off-broadside behaviour at one probe angle: how far the per-element
/// path phases spread (unwrapped span, max - min) and the noiseless
/// broadside-stream SER seen there while element hopping is active.
struct LeakagePoint {
  double theta_rad = 0.0;
  double phase_spread_rad = 0.0;
  double ser_y = 0.0;
};

struct QuantizationBin {
  double upper_edge_rad = 0.0;
  std::int64_t count = 0;
};

/// Discreteness of the achievable phase grid and the per-target errors it
/// induces.
struct QuantizationReport {
  int n_distinct_phases = 0;
  double max_error_rad = 0.0;
  double mean_error_rad = 0.0;
  std::vector<QuantizationBin> histogram;
};

struct DemodResult {
  int symbol_index = 0;
  /// Set when the sample had zero magnitude; the decision then defaults to
  /// phase 0, i.e. index 0.
  bool degenerate = false;
};

/// Constellation index with the smallest circular distance to the observed
/// phase; exact boundary ties go to the smaller index.
int nearest_psk_index(Phase observed, const PskConfig& cfg);

/// Coherent phase-only decision after removing the known reference phase.
DemodResult coherent_demod_psk(std::complex<double> sample, const PskConfig& cfg,
                               Phase reference_phase);

/// Gaussian tail probability Q(x).
double gaussian_q(double x);

/// Exact coherent M-PSK symbol error rate over AWGN at the given per-symbol
/// SNR: Q(sqrt(2*gamma)) for M = 2, otherwise the single-integral form
/// (1/pi) * Int_0^{pi(M-1)/M} exp(-gamma sin^2(pi/M) / sin^2 t) dt,
/// evaluated by quadrature. Requires M >= 2.
double theoretical_psk_ser(int order, double es_over_n0_db);

/// Monte Carlo SER of both streams over the idealized geometry: axial
/// receiver on the array axis, broadside receiver perpendicular, plane-wave
/// paths, AWGN per receiver, genie-aided coherent demodulation against the
/// ideal constellations. Symbol and noise draws are pure functions of
/// (seed, point, symbol index), so results are bit-identical for any
/// n_threads.
std::vector<SerPoint> ser_sweep(const ArrayConfig& array, const PskConfig& psk_axial,
                                const PskConfig& psk_broadside,
                                std::span<const double> snr_grid_db, std::int64_t n_symbols,
                                std::uint64_t seed, int n_threads = 1);

enum class ChannelModel { plane, spherical };

/// Scans probe angles from broadside (0) to axial (pi/2): per-element phase
/// spread plus the exhaustive noiseless SER of the broadside stream when
/// element hopping is driven by uniform axial symbols (same constellation
/// order as the broadside stream).
std::vector<LeakagePoint> leakage_scan(const ArrayConfig& array, const PskConfig& psk_broadside,
                                       std::span<const double> theta_grid_rad, ChannelModel model,
                                       double probe_range_m);

/// Quantization report against an explicit list of target phases.
QuantizationReport quantization_report(const ArrayConfig& array,
                                       std::span<const double> target_phases_rad);

/// Quantization report against the M-PSK constellation grid.
QuantizationReport quantization_report(const ArrayConfig& array, int psk_order);

}  // namespace qdm
