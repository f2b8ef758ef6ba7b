#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdm/experiment.hpp"

namespace {

void print_usage(std::ostream& os) {
  os << "usage: qdmsim <subcommand> [--config FILE] [--threads N] [--KEY VALUE ...]\n"
        "\n"
        "subcommands:\n"
        "  ser-sweep            Monte Carlo symbol error rate of both streams vs Es/N0\n"
        "  doppler-spectrum     periodogram shift estimate of the element-switching sweep\n"
        "  leakage-scan         per-angle phase spread and broadside-stream SER\n"
        "  quantization-report  achievable phase grid and per-target errors\n"
        "  transmit-demo        per-symbol trace of the joint modulation (<= 100 symbols)\n"
        "\n"
        "Any config key can be overridden with --KEY VALUE, e.g. --n_elements 32.\n"
        "--threads shards Monte Carlo work without changing results.\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    print_usage(std::cerr);
    return qdm::kExitValidation;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    print_usage(std::cout);
    return qdm::kExitOk;
  }

  const std::string subcommand = args[0];
  std::optional<std::string> config_path;
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> overrides;

  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      std::cerr << "error: field 'arguments': expected --key value, got '" << arg << "'\n";
      return qdm::kExitValidation;
    }
    const std::string key = arg.substr(2);
    if (i + 1 >= args.size()) {
      std::cerr << "error: field '" << key << "': missing value\n";
      return qdm::kExitValidation;
    }
    const std::string& value = args[++i];
    if (key == "config") {
      config_path = value;
    } else if (key == "threads") {
      const auto res = std::from_chars(value.data(), value.data() + value.size(), threads);
      if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        std::cerr << "error: field 'threads': expected an integer, got '" << value << "'\n";
        return qdm::kExitValidation;
      }
    } else {
      overrides.emplace_back(key, value);
    }
  }

  return qdm::run_experiment(subcommand, config_path, overrides, threads, std::cout, std::cerr);
}
