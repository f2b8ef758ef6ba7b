#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qdm {

/// Configuration error naming the offending field. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::runtime_error(reason), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// File-system failure (unreadable config, unwritable output). Exit code 2.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat experiment description. Defaults describe the reference setup:
/// 16 elements over two wavelengths, QPSK on both streams.
struct ExperimentConfig {
  double wavelength_m = 1.0;
  int n_elements = 16;
  std::optional<double> aperture_m;  // defaults to two wavelengths
  int psk_order_x = 4;               // axial stream
  int psk_order_y = 4;               // broadside stream
  std::vector<double> snr_grid_db = {0.0, 2.0, 4.0, 6.0, 8.0};
  std::int64_t n_symbols = 100000;
  std::uint64_t seed = 42;
  double residence_time_s = 1e-3;
  int oversample = 8;
  int repeats = 8;
  std::vector<double> theta_grid_deg = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90};
  std::string channel_model = "plane";  // plane | spherical
  double receiver_range_m = 200.0;
  std::string output_path = "qdm_out.csv";

  double resolved_aperture_m() const {
    return aperture_m.has_value() ? *aperture_m : 2.0 * wavelength_m;
  }
};

/// Merges `key = value` lines into cfg. '#' starts a comment; lists are
/// comma-separated. Throws IoError if the file cannot be read and
/// ConfigError on unknown keys or malformed values.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// Applies a single key/value override (same keys as the config file).
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Cross-field validation; throws ConfigError naming the first bad field.
/// The subcommand matters: transmit-demo caps n_symbols at 100.
void validate_config(const ExperimentConfig& cfg, const std::string& subcommand);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs one subcommand end to end: defaults, optional config file,
/// overrides, validation, computation, CSV artifact. Subcommands:
/// ser-sweep, doppler-spectrum, leakage-scan, quantization-report,
/// transmit-demo. Returns a process exit code and never throws; no output
/// file survives a failed run. n_threads only shards work, it never
/// changes results.
int run_experiment(const std::string& subcommand, const std::optional<std::string>& config_path,
                   const std::vector<std::pair<std::string, std::string>>& overrides,
                   int n_threads, std::ostream& out, std::ostream& err);

}  // namespace qdm
