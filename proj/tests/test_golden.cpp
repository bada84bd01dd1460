#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coevent/scenarios.hpp"

using namespace coevent;

namespace {

// Set COEVENT_UPDATE_GOLDEN=1 to rewrite the files instead of comparing.
void compare_with_golden(const std::string& name, const std::string& text) {
  const std::string path = std::string(COEVENT_GOLDEN_DIR) + "/" + name;
  if (std::getenv("COEVENT_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path, std::ios::binary) << text;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK_MESSAGE(ss.str() == text, name << " differs from the current output");
}

std::string report(const std::string& scenario, const std::map<std::string, double>& params = {}) {
  return emit_report(run_scenario(build_scenario(scenario, params)), ReportFormat::kJson);
}

}  // namespace

TEST_CASE("pbr-v1 report") { compare_with_golden("report_pbr-v1.json", report("pbr-v1")); }

TEST_CASE("pbr-v2 report") { compare_with_golden("report_pbr-v2.json", report("pbr-v2")); }

TEST_CASE("appendix-theta report") {
  compare_with_golden("report_appendix-theta_0.7.json", report("appendix-theta", {{"theta", 0.7}}));
}

TEST_CASE("appendix-hamiltonian report") {
  compare_with_golden("report_appendix-hamiltonian_0.7.json", report("appendix-hamiltonian", {{"theta", 0.7}}));
}

TEST_CASE("composite-product report") {
  compare_with_golden("report_composite-product.json", report("composite-product"));
}

TEST_CASE("default sweep") {
  compare_with_golden("sweep_default.json", emit_sweep(theta_sweep(0.1, 1.4, 27), ReportFormat::kJson));
}
