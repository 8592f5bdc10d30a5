// End-to-end tests that drive the installed CLI binary through a shell.
// The binary path arrives as argv[1]; every junction document the tests
// need is written to a private temp directory first, so nothing depends
// on the working directory the runner picked.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string g_cli;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

const std::filesystem::path& work_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "scr1d_cli_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_doc(const std::string& name, const std::string& text) {
  const auto path = work_dir() / name;
  std::ofstream f(path);
  f << text;
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int serial = 0;
  const auto errfile = work_dir() / ("stderr." + std::to_string(serial++));
  const std::string cmd =
      "\"" + g_cli + "\" " + args + " 2>\"" + errfile.string() + "\"";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    throw std::runtime_error("popen failed for: " + cmd);
  }
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errfile);
  std::filesystem::remove(errfile);
  return r;
}

// Abrupt 1e16/1e16 cm^-3 with a pinned built-in voltage, so the depletion
// width has a closed form: W = sqrt(2*eps*(V_bi - V)*2/(q*N)).
const std::string& abrupt_doc() {
  static const std::string path = write_doc("abrupt.json", R"({
    "profile": {"type": "abrupt", "N_A_cm3": 1e16, "N_D_cm3": 1e16, "x_j_um": 0.0},
    "material": {"eps_r": 11.7, "T_K": 300.0, "n_i_cm3": 1.5e10},
    "v_bi_override_V": 0.6934
  })");
  return path;
}

// Shallow diffused profile whose depletion region hits the surface near
// -2.55 V of reverse bias.
const std::string& shallow_doc() {
  static const std::string path = write_doc("shallow.json", R"({
    "profile": {"type": "gaussian", "C0_cm3": 3e15, "L_um": 1.0, "N_B_cm3": 1e15},
    "material": {"eps_r": 11.7, "T_K": 300.0, "n_i_cm3": 1.5e10}
  })");
  return path;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("verify is deterministic and passes") {
  const RunResult first = run_cli("verify --cases 100 --seed 7");
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("cases: 100") != std::string::npos);
  CHECK(first.out.find("PASS") != std::string::npos);

  const RunResult second = run_cli("verify --cases 100 --seed 7");
  CHECK(second.out == first.out);

  const RunResult other_seed = run_cli("verify --cases 100 --seed 8");
  CHECK(other_seed.exit_code == 0);
}

TEST_CASE("solve reproduces the abrupt closed-form width") {
  const RunResult r =
      run_cli("solve --spec " + abrupt_doc() + " --bias 0 --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double w = j.at("W_m").get<double>();
  const double expected = 4.2348108125420929782e-7;
  CHECK(std::abs(w / expected - 1.0) < 1e-9);
  CHECK(j.at("V_bi_V").get<double>() == 0.6934);
  // Symmetric doping about x_j = 0 splits the region evenly.
  CHECK(std::abs(j.at("x1_m").get<double>() + w / 2) < 1e-15);
  CHECK(std::abs(j.at("x2_m").get<double>() - w / 2) < 1e-15);

  const RunResult csv = run_cli("solve --spec " + abrupt_doc() + " --bias 0");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("x1_m,x2_m,W_m,V_applied_V,V_bi_V,E_peak_V_per_m,"
                      "residual_neutrality_C_per_m2,residual_moment_V\n",
                      0) == 0);
  CHECK(count_lines(csv.out) == 2);
}

TEST_CASE("solve rejects forward bias at the built-in voltage") {
  const RunResult r =
      run_cli("solve --spec " + abrupt_doc() + " --bias 0.95");
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  const auto rec = nlohmann::json::parse(r.err);
  CHECK(rec.at("error").get<std::string>() == "BiasExceedsBuiltIn");
}

TEST_CASE("punch-through failures carry a usable bias limit") {
  const RunResult r =
      run_cli("solve --spec " + shallow_doc() + " --bias -4");
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  const auto rec = nlohmann::json::parse(r.err);
  CHECK(rec.at("error").get<std::string>() == "SurfaceReached");
  const double limit = rec.at("limit_estimate").get<double>();
  CHECK(limit < -2.5);
  CHECK(limit > -3.0);

  // The reported limit is itself solvable once backed off slightly.
  char bias[64];
  std::snprintf(bias, sizeof(bias), "%.6f", limit + 0.01);
  const RunResult ok =
      run_cli("solve --spec " + shallow_doc() + " --bias " + bias);
  CHECK(ok.exit_code == 0);
}

TEST_CASE("document problems exit with code 2") {
  const std::string bad = write_doc("bad.json", "{ this is not json");
  const RunResult malformed = run_cli("solve --spec " + bad + " --bias 0");
  CHECK(malformed.exit_code == 2);
  CHECK(nlohmann::json::parse(malformed.err).at("error") ==
        "MalformedDocument");

  const RunResult missing =
      run_cli("solve --spec " + (work_dir() / "nope.json").string() +
              " --bias 0");
  CHECK(missing.exit_code == 2);

  const std::string unphysical = write_doc("unphysical.json", R"({
    "profile": {"type": "abrupt", "N_A_cm3": -1e16, "N_D_cm3": 1e16, "x_j_um": 0},
    "material": {"eps_r": 11.7, "T_K": 300.0, "n_i_cm3": 1.5e10}
  })");
  const RunResult invalid = run_cli("solve --spec " + unphysical + " --bias 0");
  CHECK(invalid.exit_code == 2);
  CHECK(nlohmann::json::parse(invalid.err).at("error") == "InvalidSpec");
}

TEST_CASE("cv emits the pinned header and identical bytes on reruns") {
  const std::string args =
      "cv --spec " + abrupt_doc() + " --vmin -3 --vmax 0 --points 4";
  const RunResult first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.rfind("V_volts,W_meters,C_Fm2,Q_Cm2,status\n", 0) == 0);
  CHECK(count_lines(first.out) == 5);
  CHECK(first.out.find(",ok\n") != std::string::npos);

  const RunResult second = run_cli(args);
  CHECK(second.out == first.out);

  const auto outfile = work_dir() / "cv.csv";
  const RunResult filed = run_cli(args + " --out " + outfile.string());
  CHECK(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(outfile) == first.out);

  const RunResult as_json = run_cli(args + " --format json");
  REQUIRE(as_json.exit_code == 0);
  const auto j = nlohmann::json::parse(as_json.out);
  REQUIRE(j.at("points").size() == 4);
  CHECK(j.at("points").front().at("V_volts").get<double>() == -3.0);
  CHECK(j.at("points").back().at("status").get<std::string>() == "ok");
}

TEST_CASE("cv marks unsolvable points without aborting the sweep") {
  const RunResult r = run_cli("cv --spec " + shallow_doc() +
                              " --vmin -4 --vmax 0 --points 5 --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("points").size() == 5);
  CHECK(j.at("points")[0].at("status") == "SurfaceReached");
  CHECK(j.at("points")[0].at("W_meters").is_null());
  CHECK(j.at("points")[4].at("status") == "ok");
  CHECK(j.at("points")[4].at("W_meters").is_number());
}

TEST_CASE("field profile starts at zero potential and ends at the full drop") {
  const RunResult r = run_cli("field --spec " + abrupt_doc() +
                              " --bias -1 --samples 9");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("x_meters,rho_C_per_m3,E_V_per_m,u_volts\n", 0) == 0);
  REQUIRE(count_lines(r.out) == 10);

  std::istringstream in(r.out);
  std::string line, first_row, last_row;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (first_row.empty()) first_row = line;
    last_row = line;
  }
  const auto last_comma = last_row.rfind(',');
  const double u_end = std::stod(last_row.substr(last_comma + 1));
  CHECK(std::abs(u_end - (0.6934 + 1.0)) < 1e-6);
  const double u_start =
      std::stod(first_row.substr(first_row.rfind(',') + 1));
  CHECK(u_start == 0.0);

  const RunResult as_json = run_cli("field --spec " + abrupt_doc() +
                                    " --bias -1 --samples 9 --format json");
  REQUIRE(as_json.exit_code == 0);
  const auto j = nlohmann::json::parse(as_json.out);
  CHECK(j.at("samples").size() == 9);
  CHECK(j.at("V_bi_V").get<double>() == 0.6934);

  const RunResult forward = run_cli("field --spec " + abrupt_doc() +
                                    " --bias 0.95 --samples 9");
  CHECK(forward.exit_code == 1);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("solve --bias 0").exit_code == 2);
  CHECK(run_cli("solve --spec " + abrupt_doc()).exit_code == 2);
  CHECK(run_cli("cv --spec " + abrupt_doc() +
                " --vmin -1 --vmax 0 --points 1")
            .exit_code == 2);
  CHECK(run_cli("verify --cases 0").exit_code == 2);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli> [doctest options]\n",
                 argv[0]);
    return 2;
  }
  g_cli = argv[1];
  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  return context.run();
}
