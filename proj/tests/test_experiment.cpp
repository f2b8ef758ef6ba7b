#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>

#include "qdm/experiment.hpp"

using namespace qdm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qdm-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int run(const std::string& subcommand, const std::optional<std::string>& config,
        const std::vector<std::pair<std::string, std::string>>& overrides, int threads = 1,
        std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_experiment(subcommand, config, overrides, threads, out, err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("config file: keys, comments, and lists") {
  TempDir dir;
  const std::string cfg_path = dir.file("a.cfg");
  write_file(cfg_path,
             "# reference setup\n"
             "wavelength_m = 0.5\n"
             "n_elements = 32   # plenty\n"
             "snr_grid_db = 0, 4, 8\n"
             "\n"
             "channel_model = spherical\n");
  ExperimentConfig cfg;
  load_config_file(cfg, cfg_path);
  CHECK(cfg.wavelength_m == 0.5);
  CHECK(cfg.n_elements == 32);
  CHECK(cfg.snr_grid_db == std::vector<double>{0.0, 4.0, 8.0});
  CHECK(cfg.channel_model == "spherical");
  CHECK(cfg.resolved_aperture_m() == 1.0);  // tracks 2 * wavelength
}

TEST_CASE("config file: malformed content names the offender") {
  TempDir dir;
  const std::string cfg_path = dir.file("bad.cfg");

  write_file(cfg_path, "no_such_key = 3\n");
  ExperimentConfig cfg;
  CHECK_THROWS_WITH_AS(load_config_file(cfg, cfg_path), "unknown configuration key",
                       ConfigError);

  write_file(cfg_path, "n_elements = banana\n");
  CHECK_THROWS_AS(load_config_file(cfg, cfg_path), ConfigError);

  write_file(cfg_path, "just some words\n");
  CHECK_THROWS_AS(load_config_file(cfg, cfg_path), ConfigError);

  CHECK_THROWS_AS(load_config_file(cfg, dir.file("missing.cfg")), IoError);
}

TEST_CASE("overrides take precedence over the file") {
  TempDir dir;
  const std::string cfg_path = dir.file("a.cfg");
  write_file(cfg_path, "n_elements = 32\n");
  ExperimentConfig cfg;
  load_config_file(cfg, cfg_path);
  apply_override(cfg, "n_elements", "64");
  apply_override(cfg, "seed", "123");
  CHECK(cfg.n_elements == 64);
  CHECK(cfg.seed == 123);
  CHECK_THROWS_AS(apply_override(cfg, "wavelenght", "1"), ConfigError);
}

TEST_CASE("validation names the first offending field") {
  ExperimentConfig cfg;
  cfg.psk_order_x = 3;
  try {
    validate_config(cfg, "ser-sweep");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "psk_order_x");
  }

  ExperimentConfig demo;
  demo.n_symbols = 1000;
  CHECK_NOTHROW(validate_config(demo, "ser-sweep"));
  try {
    validate_config(demo, "transmit-demo");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n_symbols");
  }
}

TEST_CASE("ser-sweep: CSV schema and row count") {
  TempDir dir;
  const std::string out_path = dir.file("ser.csv");
  const int code = run("ser-sweep", std::nullopt,
                       {{"snr_grid_db", "0,8"},
                        {"n_symbols", "2000"},
                        {"output_path", out_path}});
  CHECK(code == kExitOk);
  const std::string csv = read_file(out_path);
  CHECK(csv.rfind("es_over_n0_db,ser_rx,ser_ry,n_symbols,errors_rx,errors_ry\n", 0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 3);  // header + one row per SNR point
}

TEST_CASE("ser-sweep: numeric fields round-trip through the CSV text") {
  TempDir dir;
  const std::string out_path = dir.file("ser.csv");
  REQUIRE(run("ser-sweep", std::nullopt,
              {{"snr_grid_db", "0.1,7.25"},
               {"n_symbols", "3000"},
               {"output_path", out_path}}) == kExitOk);
  std::istringstream csv(read_file(out_path));
  std::string line;
  std::getline(csv, line);  // header
  std::getline(csv, line);
  std::istringstream row(line);
  std::string cell;
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == 0.1);  // exact: shortest round-trip formatting
  std::getline(row, cell, ',');
  const double ser_rx = std::stod(cell);
  std::getline(row, cell, ',');
  std::getline(row, cell, ',');
  CHECK(std::stoll(cell) == 3000);
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) / 3000.0 == ser_rx);
}

TEST_CASE("quantization-report output carries the distinct-phase count") {
  TempDir dir;
  const std::string out_path = dir.file("quant.csv");
  const int code = run("quantization-report", std::nullopt, {{"output_path", out_path}});
  CHECK(code == kExitOk);
  const std::string text = read_file(out_path);
  CHECK(text.find("n_distinct=8") != std::string::npos);
  CHECK(text.find("bin_upper_rad,count") != std::string::npos);
}

TEST_CASE("missing config file exits 2 and writes nothing") {
  TempDir dir;
  const std::string out_path = dir.file("never.csv");
  std::string err;
  const int code = run("ser-sweep", dir.file("absent.cfg"), {{"output_path", out_path}}, 1, &err);
  CHECK(code == kExitIo);
  CHECK_FALSE(fs::exists(out_path));
  CHECK(err.find("absent.cfg") != std::string::npos);
}

TEST_CASE("validation failure exits 1, names the field, writes nothing") {
  TempDir dir;
  const std::string out_path = dir.file("never.csv");
  std::string err;
  const int code = run("ser-sweep", std::nullopt,
                       {{"n_elements", "0"}, {"output_path", out_path}}, 1, &err);
  CHECK(code == kExitValidation);
  CHECK(err.find("n_elements") != std::string::npos);
  CHECK_FALSE(fs::exists(out_path));
}

TEST_CASE("unknown subcommand exits 1") {
  std::string err;
  CHECK(run("frobnicate", std::nullopt, {}, 1, &err) == kExitValidation);
  CHECK(err.find("subcommand") != std::string::npos);
}

TEST_CASE("unwritable output path exits 2") {
  std::string err;
  const int code = run("quantization-report", std::nullopt,
                       {{"output_path", "/nonexistent-dir/x.csv"}}, 1, &err);
  CHECK(code == kExitIo);
}

TEST_CASE("transmit-demo: bounded trace length") {
  TempDir dir;
  const std::string out_path = dir.file("demo.csv");
  CHECK(run("transmit-demo", std::nullopt,
            {{"n_symbols", "10"}, {"output_path", out_path}}) == kExitOk);
  const std::string csv = read_file(out_path);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 11);
  CHECK(csv.rfind("symbol,sym_x,sym_y,element_index,", 0) == 0);

  std::string err;
  CHECK(run("transmit-demo", std::nullopt,
            {{"n_symbols", "101"}, {"output_path", out_path}}, 1, &err) == kExitValidation);
  CHECK(err.find("n_symbols") != std::string::npos);
}

TEST_CASE("doppler-spectrum and leakage-scan produce their schemas") {
  TempDir dir;
  const std::string dop_path = dir.file("dop.csv");
  CHECK(run("doppler-spectrum", std::nullopt,
            {{"n_elements", "64"}, {"output_path", dop_path}}) == kExitOk);
  const std::string dop = read_file(dop_path);
  CHECK(dop.rfind("n_elements,spacing_m,residence_time_s,sample_rate_hz,", 0) == 0);

  const std::string leak_path = dir.file("leak.csv");
  CHECK(run("leakage-scan", std::nullopt,
            {{"theta_grid_deg", "0,45,90"}, {"output_path", leak_path}}) == kExitOk);
  const std::string leak = read_file(leak_path);
  CHECK(leak.rfind("theta_deg,theta_rad,phase_spread_rad,ser_y\n", 0) == 0);
  int lines = 0;
  for (char c : leak) lines += c == '\n';
  CHECK(lines == 4);
}

TEST_CASE("reruns are byte-identical, independent of thread count") {
  TempDir dir;
  const std::string a = dir.file("a.csv");
  const std::string b = dir.file("b.csv");
  const std::vector<std::pair<std::string, std::string>> base = {
      {"snr_grid_db", "0,6"}, {"n_symbols", "5000"}, {"seed", "99"}};

  auto with_output = [&](const std::string& path) {
    auto v = base;
    v.emplace_back("output_path", path);
    return v;
  };
  REQUIRE(run("ser-sweep", std::nullopt, with_output(a), 1) == kExitOk);
  REQUIRE(run("ser-sweep", std::nullopt, with_output(b), 4) == kExitOk);
  CHECK(read_file(a) == read_file(b));

  REQUIRE(run("ser-sweep", std::nullopt, with_output(b), 1) == kExitOk);
  CHECK(read_file(a) == read_file(b));
}

#ifdef QDM_TOOL_PATH
TEST_CASE("the installed binary honors the same contract") {
  TempDir dir;
  const std::string out_path = dir.file("cli.csv");
  const std::string cmd = std::string(QDM_TOOL_PATH) +
                          " ser-sweep --snr_grid_db 0 --n_symbols 500 --output_path " + out_path +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(out_path));

  const std::string bad = std::string(QDM_TOOL_PATH) + " ser-sweep --config " +
                          dir.file("nope.cfg") + " > /dev/null 2>&1";
  const int bad_status = std::system(bad.c_str());
  REQUIRE(WIFEXITED(bad_status));
  CHECK(WEXITSTATUS(bad_status) == 2);
}
#endif
