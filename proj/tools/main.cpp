#include <clocale>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scr1d/charge_moment.hpp"
#include "scr1d/errors.hpp"
#include "scr1d/junction.hpp"
#include "scr1d/spec_io.hpp"
#include "scr1d/verify.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Output is assembled fully in memory and written in one go, so a failure
// mid-computation never leaves a truncated file or partial stream behind.
void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open output file \"" + out_path + "\"");
  }
  f << text;
}

void emit_error_record(const std::string& code, const std::string& detail,
                       const double* limit_estimate = nullptr) {
  json rec;
  rec["error"] = code;
  rec["detail"] = detail;
  if (limit_estimate != nullptr) {
    rec["limit_estimate"] = *limit_estimate;
  }
  std::fprintf(stderr, "%s\n", rec.dump().c_str());
}

int run_verify(int cases, std::uint64_t seed, const std::string& out_path) {
  const scr1d::EquivalenceReport report =
      scr1d::run_equivalence_suite(seed, cases);
  std::ostringstream os;
  os << "cases: " << report.cases << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "max residual: %.6e (bound %.1e)\n",
                report.max_residual, report.bound);
  os << line;
  os << "worst case " << report.worst_index << ": " << report.worst_description
     << "\n";
  os << (report.pass ? "PASS" : "FAIL") << "\n";
  write_output(os.str(), out_path);
  return report.pass ? 0 : 1;
}

int run_field(const std::string& spec_path, double bias, int samples,
              const std::string& format, const std::string& out_path) {
  const scr1d::JunctionSpec spec =
      scr1d::to_si(scr1d::load_document(spec_path));
  const scr1d::DepletionSolution sol = scr1d::solve_depletion(spec, bias);
  const scr1d::ChargeRegion region = scr1d::depletion_region(spec, sol);
  const scr1d::FieldProfile profile =
      scr1d::field_profile(region, samples - 1);

  std::string text;
  if (format == "json") {
    json root;
    root["V_applied_V"] = bias;
    root["V_bi_V"] = sol.v_bi;
    root["x1_m"] = sol.x1;
    root["x2_m"] = sol.x2;
    json rows = json::array();
    for (const scr1d::FieldSample& s : profile.samples) {
      rows.push_back(json{{"x_meters", s.x},
                          {"rho_C_per_m3", region.rho()(s.x)},
                          {"E_V_per_m", s.e},
                          {"u_volts", s.u}});
    }
    root["samples"] = std::move(rows);
    text = root.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "x_meters,rho_C_per_m3,E_V_per_m,u_volts\n";
    for (const scr1d::FieldSample& s : profile.samples) {
      os << num(s.x) << ',' << num(region.rho()(s.x)) << ',' << num(s.e)
         << ',' << num(s.u) << "\n";
    }
    text = os.str();
  }
  write_output(text, out_path);
  return 0;
}

int run_solve(const std::string& spec_path, double bias,
              const std::string& format, const std::string& out_path) {
  const scr1d::JunctionSpec spec =
      scr1d::to_si(scr1d::load_document(spec_path));
  const scr1d::DepletionSolution sol = scr1d::solve_depletion(spec, bias);

  std::string text;
  if (format == "json") {
    json root;
    root["x1_m"] = sol.x1;
    root["x2_m"] = sol.x2;
    root["W_m"] = sol.w;
    root["V_applied_V"] = sol.v_applied;
    root["V_bi_V"] = sol.v_bi;
    root["E_peak_V_per_m"] = sol.e_peak;
    root["residual_neutrality_C_per_m2"] = sol.residual_neutrality;
    root["residual_moment_V"] = sol.residual_moment;
    text = root.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "x1_m,x2_m,W_m,V_applied_V,V_bi_V,E_peak_V_per_m,"
          "residual_neutrality_C_per_m2,residual_moment_V\n";
    os << num(sol.x1) << ',' << num(sol.x2) << ',' << num(sol.w) << ','
       << num(sol.v_applied) << ',' << num(sol.v_bi) << ','
       << num(sol.e_peak) << ',' << num(sol.residual_neutrality) << ','
       << num(sol.residual_moment) << "\n";
    text = os.str();
  }
  write_output(text, out_path);
  return 0;
}

int run_cv(const std::string& spec_path, double v_min, double v_max,
           int points, const std::string& format,
           const std::string& out_path) {
  const scr1d::JunctionSpec spec =
      scr1d::to_si(scr1d::load_document(spec_path));
  const scr1d::CVCurve curve = scr1d::cv_sweep(spec, v_min, v_max, points);

  std::string text;
  if (format == "json") {
    json rows = json::array();
    for (const scr1d::CVPoint& p : curve.points) {
      rows.push_back(json{{"V_volts", p.v},
                          {"W_meters", p.w},
                          {"C_Fm2", p.c_area},
                          {"Q_Cm2", p.q_area},
                          {"status", p.status}});
    }
    json root;
    root["points"] = std::move(rows);
    text = root.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "V_volts,W_meters,C_Fm2,Q_Cm2,status\n";
    for (const scr1d::CVPoint& p : curve.points) {
      os << num(p.v) << ',' << num(p.w) << ',' << num(p.c_area) << ','
         << num(p.q_area) << ',' << p.status << "\n";
    }
    text = os.str();
  }
  write_output(text, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{
      "1-D space-charge-region electrostatics: junction depletion solver "
      "and charge-moment voltage verification"};
  app.require_subcommand(1);

  int cases = 1000;
  std::uint64_t seed = 12345;
  std::string spec_path;
  double bias = 0.0;
  int samples = 201;
  double v_min = 0.0;
  double v_max = 0.0;
  int points = 0;
  std::string format = "csv";
  std::string out_path;

  CLI::App* verify = app.add_subcommand(
      "verify",
      "Check scr_voltage against direct Poisson double integration on "
      "randomized charge regions");
  verify->add_option("--cases", cases, "Number of random regions (default 1000)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Generator seed (default 12345)");
  verify->add_option("--out", out_path, "Write the report to a file");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "Junction document (JSON)")
        ->required();
    cmd->add_option("--format", format, "Output format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out_path,
                    "Write output to a file instead of standard output");
  };

  CLI::App* field = app.add_subcommand(
      "field", "Solve the junction and emit the x, rho, E, u profile table");
  add_common(field);
  field->add_option("--bias", bias,
                    "Applied bias in volts, forward positive (default 0)");
  field->add_option("--samples", samples,
                    "Number of table rows (default 201)")
      ->check(CLI::Range(3, 1000000));

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the depletion region at one bias and emit the solution");
  add_common(solve);
  solve->add_option("--bias", bias, "Applied bias in volts, forward positive")
      ->required();

  CLI::App* cv = app.add_subcommand(
      "cv", "Sweep bias and emit the capacitance-voltage curve");
  add_common(cv);
  cv->add_option("--vmin", v_min, "Sweep start, volts")->required();
  cv->add_option("--vmax", v_max, "Sweep end, volts")->required();
  cv->add_option("--points", points, "Number of sweep points")
      ->required()
      ->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(cases, seed, out_path);
    if (field->parsed())
      return run_field(spec_path, bias, samples, format, out_path);
    if (solve->parsed()) return run_solve(spec_path, bias, format, out_path);
    return run_cv(spec_path, v_min, v_max, points, format, out_path);
  } catch (const scr1d::MalformedDocument& e) {
    emit_error_record(e.code(), e.what());
    return 2;
  } catch (const scr1d::SurfaceReached& e) {
    emit_error_record(e.code(), e.what(), &e.limit_estimate);
    return 1;
  } catch (const scr1d::Error& e) {
    emit_error_record(e.code(), e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    emit_error_record("InvalidSpec", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error_record("InternalError", e.what());
    return 1;
  }
}
