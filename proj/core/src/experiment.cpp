#include "qdm/experiment.hpp"

#include <bit>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qdm/analysis.hpp"
#include "qdm/doppler.hpp"
#include "qdm/fft.hpp"
#include "qdm/rng.hpp"

namespace qdm {

namespace {

// Same salt as the ser_sweep symbol streams so transmit-demo shows the
// exact draws of sweep point 0.
constexpr std::uint64_t kSymbolStreamSalt = 0x53594d424f4c5331ull;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Shortest decimal form that round-trips to the same double; to_chars never
// localizes, so CSV output is byte-stable.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError(field, "empty value");
  errno = 0;
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
  return parsed;
}

std::int64_t parse_int(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  std::int64_t parsed = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), parsed);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
  return parsed;
}

std::uint64_t parse_uint(const std::string& field, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t parsed = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), parsed);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected an unsigned integer, got '" + v + "'");
  }
  return parsed;
}

std::vector<double> parse_double_list(const std::string& field, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream stream(value);
  while (std::getline(stream, item, ',')) {
    out.push_back(parse_double(field, item));
  }
  if (out.empty()) throw ConfigError(field, "expected a comma-separated list");
  return out;
}

int parse_bounded_int(const std::string& field, const std::string& value) {
  const std::int64_t v = parse_int(field, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "value out of range");
  }
  return static_cast<int>(v);
}

void require(bool ok, const std::string& field, const std::string& reason) {
  if (!ok) throw ConfigError(field, reason);
}

ArrayConfig build_array(const ExperimentConfig& cfg) {
  return ArrayConfig(WaveConfig(cfg.wavelength_m), cfg.n_elements, cfg.resolved_aperture_m());
}

void write_output_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open output file '" + path + "'");
  }
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  file.flush();
  if (!file) {
    file.close();
    std::remove(path.c_str());
    throw IoError("failed writing output file '" + path + "'");
  }
}

std::string run_ser_sweep(const ExperimentConfig& cfg, int n_threads, std::ostream& out) {
  const ArrayConfig array = build_array(cfg);
  const PskConfig psk_axial(cfg.psk_order_x, 1.0);
  const PskConfig psk_broadside(cfg.psk_order_y, 1.0);
  const std::vector<SerPoint> points =
      ser_sweep(array, psk_axial, psk_broadside, cfg.snr_grid_db, cfg.n_symbols, cfg.seed,
                n_threads);

  std::string csv = "es_over_n0_db,ser_rx,ser_ry,n_symbols,errors_rx,errors_ry\n";
  for (const SerPoint& p : points) {
    csv += format_double(p.es_over_n0_db) + ',' + format_double(p.ser_rx) + ',' +
           format_double(p.ser_ry) + ',' + format_int(p.n_symbols) + ',' +
           format_int(p.errors_rx) + ',' + format_int(p.errors_ry) + '\n';
  }
  out << "ser-sweep: " << points.size() << " SNR points, " << cfg.n_symbols
      << " symbols each\n";
  return csv;
}

std::string run_doppler_spectrum(const ExperimentConfig& cfg, std::ostream& out) {
  const ArrayConfig array = build_array(cfg);
  const SweepConfig sweep(array, cfg.residence_time_s, cfg.oversample, cfg.repeats);
  const SweepWaveform waveform = stepped_sweep_waveform(sweep);
  const DopplerEstimate est = estimate_doppler_shift(
      waveform, static_cast<int>(next_pow2(waveform.samples.size())));

  std::string csv =
      "n_elements,spacing_m,residence_time_s,sample_rate_hz,emulated_speed_m_per_s,"
      "expected_shift_hz,estimated_shift_hz,bin_width_hz,convergence_gap_rad,aliasing_flagged\n";
  csv += format_int(array.n_elements()) + ',' + format_double(array.spacing_m()) + ',' +
         format_double(cfg.residence_time_s) + ',' + format_double(waveform.sample_rate_hz) +
         ',' + format_double(waveform.emulated_speed_m_per_s) + ',' +
         format_double(est.expected_hz) + ',' + format_double(est.shift_hz) + ',' +
         format_double(est.bin_width_hz) + ',' + format_double(convergence_gap(array)) + ',' +
         (waveform.aliasing_flagged ? "1" : "0") + '\n';
  out << "doppler-spectrum: estimated " << format_double(est.shift_hz) << " Hz (expected "
      << format_double(est.expected_hz) << " Hz, bin " << format_double(est.bin_width_hz)
      << " Hz)\n";
  return csv;
}

std::string run_leakage_scan(const ExperimentConfig& cfg, std::ostream& out) {
  const ArrayConfig array = build_array(cfg);
  const PskConfig psk_broadside(cfg.psk_order_y, 1.0);
  const ChannelModel model =
      cfg.channel_model == "plane" ? ChannelModel::plane : ChannelModel::spherical;
  std::vector<double> theta_rad;
  theta_rad.reserve(cfg.theta_grid_deg.size());
  for (double deg : cfg.theta_grid_deg) theta_rad.push_back(deg * pi / 180.0);

  const std::vector<LeakagePoint> points =
      leakage_scan(array, psk_broadside, theta_rad, model, cfg.receiver_range_m);

  std::string csv = "theta_deg,theta_rad,phase_spread_rad,ser_y\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv += format_double(cfg.theta_grid_deg[i]) + ',' + format_double(points[i].theta_rad) +
           ',' + format_double(points[i].phase_spread_rad) + ',' +
           format_double(points[i].ser_y) + '\n';
  }
  out << "leakage-scan: " << points.size() << " angles, " << cfg.channel_model << " model\n";
  return csv;
}

std::string run_quantization_report(const ExperimentConfig& cfg, std::ostream& out) {
  const ArrayConfig array = build_array(cfg);
  // 1024 uniform targets hit the grid midpoints exactly, so the reported
  // maximum is the array's true worst case.
  constexpr int kTargets = 1024;
  std::vector<double> targets(kTargets);
  for (int i = 0; i < kTargets; ++i) {
    targets[static_cast<std::size_t>(i)] = two_pi * (static_cast<double>(i) / kTargets);
  }
  const QuantizationReport report = quantization_report(array, targets);

  std::string summary;
  summary += "n_distinct=" + format_int(report.n_distinct_phases) + '\n';
  summary += "max_error_rad=" + format_double(report.max_error_rad) + '\n';
  summary += "mean_error_rad=" + format_double(report.mean_error_rad) + '\n';
  summary += "n_targets=" + format_int(kTargets) + '\n';

  std::string csv;
  std::istringstream lines(summary);
  for (std::string line; std::getline(lines, line);) csv += "# " + line + '\n';
  csv += "bin_upper_rad,count\n";
  for (const QuantizationBin& bin : report.histogram) {
    csv += format_double(bin.upper_edge_rad) + ',' + format_int(bin.count) + '\n';
  }
  out << summary;
  return csv;
}

std::string run_transmit_demo(const ExperimentConfig& cfg, std::ostream& out) {
  const ArrayConfig array = build_array(cfg);
  const PskConfig psk_axial(cfg.psk_order_x, 1.0);
  const PskConfig psk_broadside(cfg.psk_order_y, 1.0);
  const NoiseModel noise = NoiseModel::disabled();
  const std::uint64_t mask_axial = static_cast<std::uint64_t>(psk_axial.order()) - 1;
  const std::uint64_t mask_broadside = static_cast<std::uint64_t>(psk_broadside.order()) - 1;

  std::string csv =
      "symbol,sym_x,sym_y,element_index,source_phase_rad,achieved_phd_rad,"
      "achieved_phi_x_rad,quantization_error_rad,demod_x,demod_y,correct_x,correct_y\n";
  out << "transmit-demo: noiseless plane-wave trace, " << cfg.n_symbols << " symbols\n";
  out << "  i sym_x sym_y elem   source_phase   achieved_phd  achieved_phi_x     quant_err "
         "dx dy ok\n";

  for (std::int64_t i = 0; i < cfg.n_symbols; ++i) {
    CounterRng sym_rng(cfg.seed ^ kSymbolStreamSalt, static_cast<std::uint64_t>(i));
    const int sym_axial = static_cast<int>(sym_rng.next_u64() & mask_axial);
    const int sym_broadside = static_cast<int>(sym_rng.next_u64() & mask_broadside);
    const TxAssignment tx =
        modulate_joint(sym_axial, sym_broadside, psk_axial, psk_broadside, array);

    const double x_element = array.position_m(tx.element_index);
    const Phase axial_path = plane_wave_gain(x_element, pi / 2.0, array.wave()).phase;
    const ChannelGain gain_axial(1.0, axial_path - tx.achieved_phase_doppler);
    const ChannelGain gain_broadside = plane_wave_gain(x_element, 0.0, array.wave());
    const RxSamplePair rx = received_baseband(tx, 1.0, gain_axial, gain_broadside, noise,
                                              static_cast<std::uint64_t>(i));
    const int demod_axial =
        coherent_demod_psk(rx.at_axial, psk_axial, gain_axial.phase).symbol_index;
    const int demod_broadside =
        coherent_demod_psk(rx.at_broadside, psk_broadside, gain_broadside.phase).symbol_index;

    csv += format_int(i) + ',' + format_int(sym_axial) + ',' + format_int(sym_broadside) + ',' +
           format_int(tx.element_index) + ',' + format_double(tx.source_phase.radians()) + ',' +
           format_double(tx.achieved_phase_doppler.radians()) + ',' +
           format_double(tx.achieved_axial_phase.radians()) + ',' +
           format_double(tx.quantization_error_rad) + ',' + format_int(demod_axial) + ',' +
           format_int(demod_broadside) + ',' + (demod_axial == sym_axial ? "1" : "0") + ',' +
           (demod_broadside == sym_broadside ? "1" : "0") + '\n';

    char line[160];
    std::snprintf(line, sizeof(line),
                  "%3lld %5d %5d %4d %14.9f %14.9f %15.9f %13.9f %2d %2d %s\n",
                  static_cast<long long>(i), sym_axial, sym_broadside, tx.element_index,
                  tx.source_phase.radians(), tx.achieved_phase_doppler.radians(),
                  tx.achieved_axial_phase.radians(), tx.quantization_error_rad, demod_axial,
                  demod_broadside,
                  (demod_axial == sym_axial && demod_broadside == sym_broadside) ? "ok" : "ERR");
    out << line;
  }
  return csv;
}

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "wavelength_m") {
    cfg.wavelength_m = parse_double(key, value);
  } else if (key == "n_elements") {
    cfg.n_elements = parse_bounded_int(key, value);
  } else if (key == "aperture_m") {
    cfg.aperture_m = parse_double(key, value);
  } else if (key == "psk_order_x") {
    cfg.psk_order_x = parse_bounded_int(key, value);
  } else if (key == "psk_order_y") {
    cfg.psk_order_y = parse_bounded_int(key, value);
  } else if (key == "snr_grid_db") {
    cfg.snr_grid_db = parse_double_list(key, value);
  } else if (key == "n_symbols") {
    cfg.n_symbols = parse_int(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, value);
  } else if (key == "residence_time_s") {
    cfg.residence_time_s = parse_double(key, value);
  } else if (key == "oversample") {
    cfg.oversample = parse_bounded_int(key, value);
  } else if (key == "repeats") {
    cfg.repeats = parse_bounded_int(key, value);
  } else if (key == "theta_grid_deg") {
    cfg.theta_grid_deg = parse_double_list(key, value);
  } else if (key == "channel_model") {
    cfg.channel_model = trim(value);
  } else if (key == "receiver_range_m") {
    cfg.receiver_range_m = parse_double(key, value);
  } else if (key == "output_path") {
    cfg.output_path = trim(value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value', got '" + stripped + "'");
    }
    apply_override(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void validate_config(const ExperimentConfig& cfg, const std::string& subcommand) {
  require(std::isfinite(cfg.wavelength_m) && cfg.wavelength_m > 0.0, "wavelength_m",
          "must be positive and finite");
  require(cfg.n_elements >= 1, "n_elements", "must be >= 1");
  require(std::isfinite(cfg.resolved_aperture_m()) && cfg.resolved_aperture_m() > 0.0,
          "aperture_m", "must be positive and finite");
  for (int order : {cfg.psk_order_x, cfg.psk_order_y}) {
    const bool ok = order >= 2 && std::has_single_bit(static_cast<unsigned>(order));
    require(ok, order == cfg.psk_order_x ? "psk_order_x" : "psk_order_y",
            "must be a power of two >= 2");
  }
  require(!cfg.snr_grid_db.empty(), "snr_grid_db", "must not be empty");
  for (double db : cfg.snr_grid_db) {
    require(!std::isnan(db) && db != -std::numeric_limits<double>::infinity(), "snr_grid_db",
            "entries must be finite or +inf");
  }
  require(cfg.n_symbols >= 1, "n_symbols", "must be >= 1");
  if (subcommand == "transmit-demo") {
    require(cfg.n_symbols <= 100, "n_symbols", "transmit-demo traces at most 100 symbols");
  }
  require(std::isfinite(cfg.residence_time_s) && cfg.residence_time_s > 0.0,
          "residence_time_s", "must be positive and finite");
  require(cfg.oversample >= 2, "oversample", "must be >= 2");
  require(cfg.repeats >= 1, "repeats", "must be >= 1");
  require(!cfg.theta_grid_deg.empty(), "theta_grid_deg", "must not be empty");
  for (double deg : cfg.theta_grid_deg) {
    require(std::isfinite(deg) && deg >= 0.0 && deg <= 90.0, "theta_grid_deg",
            "angles must lie in [0, 90] degrees");
  }
  require(cfg.channel_model == "plane" || cfg.channel_model == "spherical", "channel_model",
          "must be 'plane' or 'spherical'");
  require(std::isfinite(cfg.receiver_range_m) && cfg.receiver_range_m > 0.0,
          "receiver_range_m", "must be positive and finite");
  require(!cfg.output_path.empty(), "output_path", "must not be empty");
}

int run_experiment(const std::string& subcommand, const std::optional<std::string>& config_path,
                   const std::vector<std::pair<std::string, std::string>>& overrides,
                   int n_threads, std::ostream& out, std::ostream& err) {
  try {
    const bool known =
        subcommand == "ser-sweep" || subcommand == "doppler-spectrum" ||
        subcommand == "leakage-scan" || subcommand == "quantization-report" ||
        subcommand == "transmit-demo";
    if (!known) {
      throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
    }
    if (n_threads < 1) {
      throw ConfigError("threads", "must be >= 1");
    }

    ExperimentConfig cfg;
    if (config_path.has_value()) {
      load_config_file(cfg, *config_path);
    }
    for (const auto& [key, value] : overrides) {
      apply_override(cfg, key, value);
    }
    validate_config(cfg, subcommand);

    std::string csv;
    if (subcommand == "ser-sweep") {
      csv = run_ser_sweep(cfg, n_threads, out);
    } else if (subcommand == "doppler-spectrum") {
      csv = run_doppler_spectrum(cfg, out);
    } else if (subcommand == "leakage-scan") {
      csv = run_leakage_scan(cfg, out);
    } else if (subcommand == "quantization-report") {
      csv = run_quantization_report(cfg, out);
    } else {
      csv = run_transmit_demo(cfg, out);
    }

    write_output_file(cfg.output_path, csv);
    out << "wrote " << cfg.output_path << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: field '" << e.field() << "': " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace qdm
