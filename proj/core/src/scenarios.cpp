#include "coevent/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coevent/error.hpp"
#include "coevent/linalg.hpp"
#include "json_detail.hpp"

namespace coevent {

namespace {

using detail::Json;

constexpr double kPi = std::numbers::pi;

double require_theta(const std::map<std::string, double>& parameters, const std::string& name) {
  auto it = parameters.find("theta");
  if (it == parameters.end())
    throw Error(ErrorCode::kMissingParameter, "scenario '" + name + "' requires parameter 'theta'");
  if (!std::isfinite(it->second)) throw Error(ErrorCode::kMalformedInput, "theta must be finite");
  return it->second;
}

void reject_unknown_parameters(const std::map<std::string, double>& parameters, const std::string& name,
                               std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : parameters) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::kMalformedInput, "scenario '" + name + "' takes no parameter '" + key + "'");
  }
}

const std::vector<std::pair<std::string, Ket>>& pbr_initial_states() {
  static const std::vector<std::pair<std::string, Ket>> states = [] {
    const Ket zero = computational_ket(2, 0);
    return std::vector<std::pair<std::string, Ket>>{{"|00>", tensor(zero, zero)},
                                                    {"|0+>", tensor(zero, ket_plus())},
                                                    {"|+0>", tensor(ket_plus(), zero)},
                                                    {"|++>", tensor(ket_plus(), ket_plus())}};
  }();
  return states;
}

ScenarioSpec pbr_v1() {
  ScenarioSpec spec;
  spec.name = "pbr-v1";
  for (const auto& [label, ket] : pbr_initial_states()) {
    spec.candidates.push_back(LabeledSchema{
        label, HistorySchema::pure(ket, {TimeSlice::unevolved(build_xi_basis())}, {"h1", "h2", "h3", "h4"})});
  }
  return spec;
}

ScenarioSpec pbr_v2() {
  ScenarioSpec spec;
  spec.name = "pbr-v2";
  for (const auto& [label, ket] : pbr_initial_states()) {
    spec.candidates.push_back(LabeledSchema{
        label, HistorySchema::pure(ket, {TimeSlice::unevolved(computational_basis(2)),
                                         TimeSlice::unevolved(build_xi_basis())})});
  }
  return spec;
}

// h_n with n = 1 + 4 f + 2 a + m, where a and f are the first and final
// outcomes (Psi+ = 0) and m the middle one (Psi0 = 0).
std::string appendix_label(std::size_t first, std::size_t middle, std::size_t final) {
  return "h" + std::to_string(1 + 4 * final + 2 * first + middle);
}

std::vector<std::pair<std::string, Ket>> appendix_initial_states(double theta) {
  Ket phi2(2);
  phi2 << std::cos(theta), std::sin(theta);
  return {{"|Phi1>", computational_ket(2, 0)}, {"|Phi2>", phi2}};
}

ScenarioSpec appendix_theta(double theta) {
  ScenarioSpec spec;
  spec.name = "appendix-theta";
  spec.parameters["theta"] = theta;
  const ThetaBases bases = build_theta_bases(theta);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t f = 0; f < 2; ++f) labels.push_back(appendix_label(a, m, f));
  for (const auto& [label, ket] : appendix_initial_states(theta)) {
    spec.candidates.push_back(LabeledSchema{
        label, HistorySchema::pure(ket,
                                   {TimeSlice::unevolved(bases.diagonal), TimeSlice::unevolved(bases.rotated),
                                    TimeSlice::unevolved(bases.diagonal)},
                                   labels)});
  }
  return spec;
}

ComplexMatrix appendix_hamiltonian_matrix() {
  ComplexMatrix h(2, 2);
  h << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(1, 0);
  return h;
}

ScenarioSpec appendix_hamiltonian(double theta) {
  ScenarioSpec spec;
  spec.name = "appendix-hamiltonian";
  spec.parameters["theta"] = theta;
  const ComplexMatrix h = appendix_hamiltonian_matrix();
  const double t1 = theta - kPi / 4;
  const double t2 = theta;
  const double t3 = theta + 7 * kPi / 4;
  const ProjectiveDecomposition basis = computational_basis(1);
  // Outcome 1 at the outer times plays Psi+, outcome 1 in the middle plays Psi1.
  std::vector<std::string> labels;
  for (std::size_t c1 = 0; c1 < 2; ++c1)
    for (std::size_t c2 = 0; c2 < 2; ++c2)
      for (std::size_t c3 = 0; c3 < 2; ++c3) labels.push_back(appendix_label(1 - c1, c2, 1 - c3));
  for (const auto& [label, ket] : appendix_initial_states(theta)) {
    spec.candidates.push_back(LabeledSchema{
        label, HistorySchema::pure(ket,
                                   {TimeSlice{unitary_from_hamiltonian(h, t1), basis},
                                    TimeSlice{unitary_from_hamiltonian(h, t2 - t1), basis},
                                    TimeSlice{unitary_from_hamiltonian(h, t3 - t2), basis}},
                                   labels)});
  }
  return spec;
}

ScenarioSpec composite_product() {
  ScenarioSpec spec;
  spec.name = "composite-product";
  const Complex i(0, 1);
  ComplexMatrix da(2, 2);
  da << 1.0, i, -i, 1.0;
  da *= 0.5;
  ComplexMatrix dab(4, 4);
  dab << 1.0, i, i, -1.0,
         -i, 1.0, 1.0, i,
         -i, 1.0, 1.0, i,
         -1.0, -i, -i, 1.0;
  dab *= 0.25;
  spec.raw_functionals.push_back(LabeledDf{"D_A", DecoherenceFunctional::from_matrix(da, {"h1", "h2"})});
  spec.raw_functionals.push_back(
      LabeledDf{"D_AB", DecoherenceFunctional::from_matrix(dab, {"h11", "h12", "h21", "h22"})});
  spec.compose = std::make_pair(std::size_t{0}, std::size_t{0});
  return spec;
}

std::vector<Event> materialize_or_empty(const ZeroSetCatalog& catalog, bool& ok) {
  try {
    ok = true;
    return catalog.maximal_zero_events();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSpaceTooLarge) throw;
    ok = false;
    return {};
  }
}

CandidateReport analyse(const std::string& label, const DecoherenceFunctional& df, const Limits& limits) {
  CandidateReport out;
  out.label = label;
  out.history_labels = df.labels();
  out.validation = df.validation();
  const std::size_t n = df.size();
  for (std::size_t i = 0; i < n; ++i) out.measures.push_back(measure(df, Event::from_indices(n, {i})));
  if (df.has_sector_info()) {
    for (std::size_t f = 0; f < df.final_outcome_labels().size(); ++f) {
      Event sector(n);
      for (std::size_t i = 0; i < n; ++i)
        if (df.final_outcome_of()[i] == f) sector.insert(i);
      out.sector_measures.emplace_back(df.final_outcome_labels()[f], measure(df, sector));
    }
  }

  const ZeroSetCatalog catalog = find_zero_sets(df, limits);
  out.zero_sets.count = catalog.zero_event_count();
  out.zero_sets.minimal = catalog.minimal_zero_events();
  out.zero_sets.minimal_nontrivial = catalog.minimal_nontrivial_zero_events();
  out.zero_sets.maximal = materialize_or_empty(catalog, out.zero_sets.maximal_materialized);
  out.zero_sets.borderline = catalog.borderline_events();

  out.coevents = enumerate_primitive_coevents(df, catalog, label);

  if (n <= kReportPartitionLimit) {
    out.medium_partitions = find_decoherent_partitions(df, DecoherenceMode::kMedium, n);
    out.weak_partitions = find_decoherent_partitions(df, DecoherenceMode::kWeak, n);
  }
  return out;
}

bool amplitudes_available(const HistorySchema& schema) {
  return schema.is_pure() && !schema.slices().empty() && schema.slices().back().decomposition.all_rank_one();
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"pbr-v1", "pbr-v2", "appendix-theta", "appendix-hamiltonian", "composite-product"};
}

ScenarioSpec build_scenario(const std::string& name, const std::map<std::string, double>& parameters) {
  if (name == "pbr-v1") {
    reject_unknown_parameters(parameters, name, {});
    return pbr_v1();
  }
  if (name == "pbr-v2") {
    reject_unknown_parameters(parameters, name, {});
    return pbr_v2();
  }
  if (name == "appendix-theta") {
    reject_unknown_parameters(parameters, name, {"theta"});
    return appendix_theta(require_theta(parameters, name));
  }
  if (name == "appendix-hamiltonian") {
    reject_unknown_parameters(parameters, name, {"theta"});
    return appendix_hamiltonian(require_theta(parameters, name));
  }
  if (name == "composite-product") {
    reject_unknown_parameters(parameters, name, {});
    return composite_product();
  }
  throw Error(ErrorCode::kUnknownScenario, "unknown scenario '" + name + "'");
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["parameters"] = Json::object();
  for (const auto& [key, value] : spec.parameters) j["parameters"][key] = value;
  j["candidates"] = Json::array();
  for (const LabeledSchema& c : spec.candidates)
    j["candidates"].push_back({{"label", c.label}, {"schema", detail::schema_to_json(c.schema)}});
  j["raw_functionals"] = Json::array();
  for (const LabeledDf& d : spec.raw_functionals)
    j["raw_functionals"].push_back({{"label", d.label}, {"df", detail::raw_df_to_json(d.df)}});
  if (spec.compose) j["compose"] = Json::array({spec.compose->first, spec.compose->second});
  return j.dump(2) + "\n";
}

ScenarioSpec parse_scenario(const std::string& json_text) {
  const Json j = detail::parse_json(json_text);
  ScenarioSpec spec;
  if (j.is_object() && !j.contains("name") && j.contains("slices")) {
    spec.name = "schema";
    spec.candidates.push_back(LabeledSchema{"initial", detail::schema_from_json(j)});
    return spec;
  }
  const Json& name = detail::require(j, "name");
  if (!name.is_string()) throw Error(ErrorCode::kMalformedInput, "name must be a string");
  spec.name = name.get<std::string>();
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) throw Error(ErrorCode::kMalformedInput, "parameters must be an object");
    for (auto it = j.at("parameters").begin(); it != j.at("parameters").end(); ++it) {
      if (!it.value().is_number()) throw Error(ErrorCode::kMalformedInput, "parameter values must be numbers");
      spec.parameters[it.key()] = it.value().get<double>();
    }
  }
  auto label_of = [](const Json& entry) {
    const Json& l = detail::require(entry, "label");
    if (!l.is_string()) throw Error(ErrorCode::kMalformedInput, "label must be a string");
    return l.get<std::string>();
  };
  if (j.contains("candidates")) {
    for (const Json& c : j.at("candidates"))
      spec.candidates.push_back(LabeledSchema{label_of(c), detail::schema_from_json(detail::require(c, "schema"))});
  }
  if (j.contains("raw_functionals")) {
    for (const Json& d : j.at("raw_functionals"))
      spec.raw_functionals.push_back(LabeledDf{label_of(d), detail::raw_df_from_json(detail::require(d, "df"))});
  }
  if (j.contains("compose")) {
    const Json& c = j.at("compose");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() || !c[1].is_number_unsigned())
      throw Error(ErrorCode::kMalformedInput, "compose must be a pair of indices");
    spec.compose = std::make_pair(c[0].get<std::size_t>(), c[1].get<std::size_t>());
    if (spec.compose->first >= spec.raw_functionals.size() || spec.compose->second >= spec.raw_functionals.size())
      throw Error(ErrorCode::kMalformedInput, "compose refers to a missing raw functional");
  }
  if (spec.candidates.empty() && spec.raw_functionals.empty())
    throw Error(ErrorCode::kMalformedInput, "scenario has no candidates");
  return spec;
}

ReportDocument run_scenario(const ScenarioSpec& spec, const Limits& limits) {
  ReportDocument doc;
  doc.scenario = spec.name;
  doc.parameters = spec.parameters;
  doc.tool_version = std::string(tool_version());

  for (const LabeledSchema& c : spec.candidates) {
    const DecoherenceFunctional df = build_df(c.schema, limits);
    CandidateReport report = analyse(c.label, df, limits);
    if (amplitudes_available(c.schema)) {
      const HistorySpace space = enumerate_histories(c.schema, limits);
      for (const OutcomeTuple& h : space.histories) report.amplitudes.push_back(amplitude(c.schema, h));
    }
    doc.candidates.push_back(std::move(report));
  }
  for (const LabeledDf& d : spec.raw_functionals) doc.candidates.push_back(analyse(d.label, d.df, limits));

  if (doc.candidates.size() >= 2) {
    const auto& labels = doc.candidates.front().history_labels;
    const bool shared = std::all_of(doc.candidates.begin(), doc.candidates.end(),
                                    [&](const CandidateReport& r) { return r.history_labels == labels; });
    if (shared) {
      std::vector<CoEventSet> sets;
      for (const CandidateReport& r : doc.candidates) sets.push_back(r.coevents);
      doc.distinguishability = distinguishability_report(sets);
    }
  }

  if (spec.compose) {
    const auto [ia, ib] = *spec.compose;
    if (ia >= spec.raw_functionals.size() || ib >= spec.raw_functionals.size())
      throw Error(ErrorCode::kMalformedInput, "compose refers to a missing raw functional");
    const CompositionReport comp =
        composition_anomalies(spec.raw_functionals[ia].df, spec.raw_functionals[ib].df, limits);
    CompositionSection section;
    section.first = spec.raw_functionals[ia].label;
    section.second = spec.raw_functionals[ib].label;
    section.product_labels = comp.product.labels();
    section.product_entries = comp.product.entries();
    section.emergent_zero = comp.emergent_zero;
    section.minimal_emergent_zero = comp.minimal_emergent_zero;
    section.weak_violations = comp.weak_violations;
    doc.composition = std::move(section);
  }

  doc.notes.push_back("D(A,B) = Tr(C_A^dagger C_B rho); amplitudes are <f|C|psi> for the final basis vector f");
  doc.notes.push_back("zero_sets.minimal lists inclusion-minimal zero events; unions of zero events from "
                      "different final sectors are zero events as well");
  for (const CandidateReport& r : doc.candidates)
    for (const std::string& w : r.coevents.warnings) doc.notes.push_back(r.label + ": " + w);
  return doc;
}

SweepPoint sweep_point(double theta, const Limits& limits) {
  const ScenarioSpec spec = appendix_theta(theta);
  SweepPoint point;
  point.theta = theta;
  point.degenerate = std::abs(std::sin(theta)) <= kUnitTolerance;
  std::vector<CoEventSet> sets;
  for (const LabeledSchema& c : spec.candidates) {
    const DecoherenceFunctional df = build_df(c.schema, limits);
    const ZeroSetCatalog catalog = find_zero_sets(df, limits);
    point.zero_counts.push_back(catalog.zero_event_count());
    point.borderline_counts.push_back(catalog.borderline_events().size());
    sets.push_back(enumerate_primitive_coevents(df, catalog, c.label));
    point.coevent_counts.push_back(sets.back().size());
  }
  point.disjoint = intersect_coevent_sets(sets).empty();
  return point;
}

SweepReport theta_sweep(double start, double end, std::size_t steps, const Limits& limits) {
  if (steps < 2) throw Error(ErrorCode::kMalformedInput, "a sweep needs at least two steps");
  if (!std::isfinite(start) || !std::isfinite(end) || !(start < end))
    throw Error(ErrorCode::kMalformedInput, "sweep range must be finite with start < end");

  SweepReport report;
  report.start = start;
  report.end = end;
  report.steps = steps;
  report.tool_version = std::string(tool_version());
  const double step = (end - start) / static_cast<double>(steps - 1);
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) grid[i] = i + 1 == steps ? end : start + step * static_cast<double>(i);

  for (std::size_t i = 0; i < steps; ++i) {
    SweepPoint p = sweep_point(grid[i], limits);
    if (i > 0) {
      const SweepPoint& prev = report.points.back();
      p.structural_change = p.zero_counts != prev.zero_counts || p.coevent_counts != prev.coevent_counts;
    }
    report.points.push_back(std::move(p));
  }

  struct Family {
    const char* name;
    double base;
    bool primary;
  };
  const Family families[] = {
      {"theta=0", 0.0, true},
      {"tan=+1/3", std::atan(1.0 / 3.0), true},
      {"tan=-1/3", -std::atan(1.0 / 3.0), true},
      {"theta=pi/4", kPi / 4, false},
      {"theta=-pi/4", -kPi / 4, false},
      {"theta=pi/2", kPi / 2, false},
      {"tan=+3", std::atan(3.0), false},
      {"tan=-3", -std::atan(3.0), false},
  };
  for (const Family& f : families) {
    const auto k_lo = static_cast<long>(std::ceil((start - f.base) / kPi - 1e-12));
    const auto k_hi = static_cast<long>(std::floor((end - f.base) / kPi + 1e-12));
    for (long k = k_lo; k <= k_hi; ++k) {
      const double angle = f.base + kPi * static_cast<double>(k);
      SpecialAngle sa;
      sa.name = f.name;
      sa.theta = angle;
      sa.primary = f.primary;
      const auto idx = std::upper_bound(grid.begin(), grid.end(), angle) - grid.begin();
      sa.lower_index = idx == 0 ? 0 : static_cast<std::size_t>(idx - 1);
      sa.upper_index = std::min(sa.lower_index + 1, steps - 1);
      sa.exact = sweep_point(angle, limits);
      report.special_angles.push_back(std::move(sa));
    }
  }
  std::sort(report.special_angles.begin(), report.special_angles.end(),
            [](const SpecialAngle& a, const SpecialAngle& b) { return a.theta < b.theta; });

  for (std::size_t i = 0; i < steps; ++i) {
    for (const SpecialAngle& sa : report.special_angles) {
      if (std::abs(grid[i] - sa.theta) <= step * (1 + 1e-9)) report.points[i].flags.push_back(sa.name);
    }
  }

  report.notes.push_back("finite grid; special angles are also evaluated exactly and listed separately");
  report.notes.push_back("zero_counts are global zero-event counts, empty event included");
  report.notes.push_back("structural_change compares zero and co-event counts with the previous grid point");
  return report;
}

}  // namespace coevent
