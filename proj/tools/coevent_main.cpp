#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coevent/error.hpp"
#include "coevent/scenarios.hpp"
#include "coevent/schema_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;
constexpr int kExitBadInput = 4;

int exit_code_for(coevent::ErrorCode code) {
  using coevent::ErrorCode;
  switch (code) {
    case ErrorCode::kValidationFailed:
    case ErrorCode::kNonHermitian:
    case ErrorCode::kNotUnitary:
    case ErrorCode::kIncompleteDecomposition:
    case ErrorCode::kImaginaryResidue:
      return kExitValidation;
    case ErrorCode::kSpaceTooLarge:
      return kExitCap;
    default:
      return kExitBadInput;
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw coevent::Error(coevent::ErrorCode::kMalformedInput, "cannot write '" + path + "'");
  out << text;
}

struct RunOptions {
  std::string name;
  std::string file;
  std::optional<double> theta;
  std::optional<double> theta_deg;
  std::string format = "json";
  std::string out;
};

struct SweepOptions {
  double start = 0.1;
  double end = 1.4;
  std::size_t steps = 27;
  std::string format = "json";
  std::string out;
};

struct AnalyzeOptions {
  std::string file;
  std::string compose_with;
  bool square = false;
  std::string format = "json";
  std::string out;
};

int run_scenario_cmd(const RunOptions& opt, const coevent::Limits& limits) {
  const auto format = coevent::parse_report_format(opt.format);
  coevent::ScenarioSpec spec;
  if (!opt.file.empty()) {
    spec = coevent::parse_scenario(coevent::read_text_file(opt.file));
  } else {
    if (opt.name.empty())
      throw coevent::Error(coevent::ErrorCode::kMissingParameter, "give a scenario name or --file");
    std::map<std::string, double> params;
    if (opt.theta) params["theta"] = *opt.theta;
    if (opt.theta_deg) params["theta"] = *opt.theta_deg * std::numbers::pi / 180.0;
    spec = coevent::build_scenario(opt.name, params);
  }
  write_output(coevent::emit_report(coevent::run_scenario(spec, limits), format), opt.out);
  return kExitOk;
}

int sweep_cmd(const SweepOptions& opt, const coevent::Limits& limits) {
  const auto format = coevent::parse_report_format(opt.format);
  write_output(coevent::emit_sweep(coevent::theta_sweep(opt.start, opt.end, opt.steps, limits), format), opt.out);
  return kExitOk;
}

int validate_cmd(const std::string& file, const coevent::Limits& limits) {
  const coevent::ScenarioSpec spec = coevent::parse_scenario(coevent::read_text_file(file));
  bool ok = true;
  auto check = [&](const std::string& label, const coevent::DecoherenceFunctional& df) {
    const auto& v = df.validation();
    std::cout << label << ": " << df.size() << " histories, ";
    if (v.ok()) {
      std::cout << "ok\n";
      return;
    }
    ok = false;
    std::cout << "FAILED";
    for (const std::string& f : v.failures()) std::cout << " " << f;
    std::cout << "\n";
  };
  for (const auto& c : spec.candidates) check(c.label, coevent::build_df(c.schema, limits));
  for (const auto& d : spec.raw_functionals) check(d.label, d.df);
  return ok ? kExitOk : kExitValidation;
}

std::string file_label(const std::string& path) { return std::filesystem::path(path).stem().string(); }

int analyze_cmd(const AnalyzeOptions& opt, const coevent::Limits& limits) {
  const auto format = coevent::parse_report_format(opt.format);
  coevent::ScenarioSpec spec;
  spec.name = "df-analyze";
  spec.raw_functionals.push_back({file_label(opt.file), coevent::parse_raw_df(coevent::read_text_file(opt.file))});
  if (opt.square) {
    spec.compose = std::make_pair(std::size_t{0}, std::size_t{0});
  } else if (!opt.compose_with.empty()) {
    spec.raw_functionals.push_back(
        {file_label(opt.compose_with), coevent::parse_raw_df(coevent::read_text_file(opt.compose_with))});
    spec.compose = std::make_pair(std::size_t{0}, std::size_t{1});
  }
  write_output(coevent::emit_report(coevent::run_scenario(spec, limits), format), opt.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum measure, zero-set and co-event analysis of history schemas"};
  app.set_version_flag("--version", std::string(coevent::tool_version()));
  app.require_subcommand(1);

  auto* scenario = app.add_subcommand("scenario", "Named scenarios and theta sweeps");
  scenario->require_subcommand(1);

  RunOptions run;
  auto* run_cmd = scenario->add_subcommand("run", "Run a named scenario or a scenario file");
  run_cmd->add_option("name", run.name, "Scenario name")
      ->check(CLI::IsMember(coevent::scenario_names()));
  run_cmd->add_option("--file", run.file, "Scenario or schema JSON file");
  auto* theta_opt = run_cmd->add_option("--theta", run.theta, "Angle in radians");
  run_cmd->add_option("--theta-deg", run.theta_deg, "Angle in degrees")->excludes(theta_opt);
  run_cmd->add_option("--format", run.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  run_cmd->add_option("--out", run.out, "Output path (default stdout)");

  SweepOptions sweep;
  auto* sweep_sub = scenario->add_subcommand("sweep", "Sweep appendix-theta over an angle grid");
  sweep_sub->add_option("--start", sweep.start, "First angle (radians)");
  sweep_sub->add_option("--end", sweep.end, "Last angle (radians)");
  sweep_sub->add_option("--steps", sweep.steps, "Number of grid points");
  sweep_sub->add_option("--format", sweep.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sweep_sub->add_option("--out", sweep.out, "Output path (default stdout)");

  std::string validate_file;
  auto* validate_sub = scenario->add_subcommand("validate", "Check the axioms of every functional in a file");
  validate_sub->add_option("--file", validate_file, "Scenario or schema JSON file")->required();

  auto* df = app.add_subcommand("df", "Raw decoherence functionals");
  df->require_subcommand(1);
  AnalyzeOptions analyze;
  auto* analyze_sub = df->add_subcommand("analyze", "Analyse a raw decoherence functional");
  analyze_sub->add_option("--file", analyze.file, "JSON file with entries and labels")->required();
  auto* square_opt = analyze_sub->add_flag("--square", analyze.square, "Also analyse D tensor D");
  analyze_sub->add_option("--compose-with", analyze.compose_with, "Second functional for the product")
      ->excludes(square_opt);
  analyze_sub->add_option("--format", analyze.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze_sub->add_option("--out", analyze.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadInput;
  }

  try {
    const coevent::Limits limits = coevent::Limits::from_environment();
    if (*run_cmd) return run_scenario_cmd(run, limits);
    if (*sweep_sub) return sweep_cmd(sweep, limits);
    if (*validate_sub) return validate_cmd(validate_file, limits);
    if (*analyze_sub) return analyze_cmd(analyze, limits);
  } catch (const coevent::Error& e) {
    std::cerr << "error [" << coevent::to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitBadInput;
}
