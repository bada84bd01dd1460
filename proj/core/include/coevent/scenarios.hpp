#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coevent/coevents.hpp"
#include "coevent/composition.hpp"
#include "coevent/histories.hpp"
#include "coevent/measure_analysis.hpp"

namespace coevent {

struct LabeledSchema {
  std::string label;
  HistorySchema schema;
};

struct LabeledDf {
  std::string label;
  DecoherenceFunctional df;
};

struct ScenarioSpec {
  std::string name;
  std::map<std::string, double> parameters;
  /// Candidate initial states, each with its full history schema.
  std::vector<LabeledSchema> candidates;
  /// Functionals given directly as matrices.
  std::vector<LabeledDf> raw_functionals;
  /// Indices into raw_functionals whose tensor product is analysed.
  std::optional<std::pair<std::size_t, std::size_t>> compose;
};

/// Registry order.
std::vector<std::string> scenario_names();

/// Throws kUnknownScenario, or kMissingParameter when an appendix scenario
/// has no "theta" (radians).
ScenarioSpec build_scenario(const std::string& name, const std::map<std::string, double>& parameters = {});

/// Scenario file: {"name", "parameters", "candidates": [{"label", "schema"}],
/// "raw_functionals": [{"label", "df"}], "compose": [i, j]?} with schema and
/// df in the formats of schema_io.hpp. Doubles round-trip exactly. A bare
/// schema document parses as a one-candidate scenario named "schema".
std::string serialize_scenario(const ScenarioSpec& spec);
ScenarioSpec parse_scenario(const std::string& json_text);

struct ZeroSetSummary {
  /// Global zero events, empty event included; saturates.
  std::size_t count = 0;
  std::vector<Event> minimal;
  std::vector<Event> minimal_nontrivial;
  /// Empty with maximal_materialized unset when the family is too large.
  std::vector<Event> maximal;
  bool maximal_materialized = true;
  std::vector<Event> borderline;
};

struct CandidateReport {
  std::string label;
  std::vector<std::string> history_labels;
  /// Present for pure states whose last slice is rank one.
  std::vector<Complex> amplitudes;
  /// mu of every fine-grained history.
  std::vector<double> measures;
  /// mu of every final sector, keyed by final outcome label.
  std::vector<std::pair<std::string, double>> sector_measures;
  ValidationReport validation;
  ZeroSetSummary zero_sets;
  CoEventSet coevents;
  /// Decoherent partitions, computed when |Omega| <= kReportPartitionLimit.
  std::vector<PartitionReport> medium_partitions;
  std::vector<PartitionReport> weak_partitions;
};

inline constexpr std::size_t kReportPartitionLimit = 4;

struct CompositionSection {
  std::string first;
  std::string second;
  std::vector<std::string> product_labels;
  ComplexMatrix product_entries;
  std::vector<Event> emergent_zero;
  std::vector<Event> minimal_emergent_zero;
  std::vector<WeakViolation> weak_violations;
};

struct ReportDocument {
  std::string scenario;
  std::map<std::string, double> parameters;
  std::string tool_version;
  std::vector<CandidateReport> candidates;
  /// Present when there are at least two candidates over the same histories.
  std::optional<DistinguishabilityReport> distinguishability;
  std::optional<CompositionSection> composition;
  std::vector<std::string> notes;
};

/// Full pipeline per candidate (build_df, validation, zero sets, co-events)
/// followed by the cross-candidate and composition analyses.
ReportDocument run_scenario(const ScenarioSpec& spec, const Limits& limits = {});

struct SweepPoint {
  double theta = 0.0;
  bool disjoint = true;
  /// Both initial states coincide up to phase.
  bool degenerate = false;
  std::vector<std::size_t> coevent_counts;
  /// Global zero-event count per initial state.
  std::vector<std::size_t> zero_counts;
  std::vector<std::size_t> borderline_counts;
  /// Zero or co-event counts differ from the previous grid point.
  bool structural_change = false;
  /// Names of special angles within one grid step of this point.
  std::vector<std::string> flags;
};

struct SpecialAngle {
  std::string name;
  double theta = 0.0;
  /// Listed among the exceptional angles of the construction; the others
  /// are further degeneracies found by exhaustive search.
  bool primary = false;
  /// Grid points bracketing the angle.
  std::size_t lower_index = 0;
  std::size_t upper_index = 0;
  /// Exact evaluation at the angle itself.
  SweepPoint exact;
};

struct SweepReport {
  double start = 0.0;
  double end = 0.0;
  std::size_t steps = 0;
  std::string tool_version;
  std::vector<SweepPoint> points;
  std::vector<SpecialAngle> special_angles;
  std::vector<std::string> notes;
};

/// appendix-theta over steps equally spaced angles from start to end
/// inclusive. Throws kMalformedInput when steps < 2 or the range is not finite.
SweepReport theta_sweep(double start, double end, std::size_t steps, const Limits& limits = {});

/// Evaluates appendix-theta at one angle.
SweepPoint sweep_point(double theta, const Limits& limits = {});

enum class ReportFormat { kJson, kText };

/// Throws kMalformedInput for unknown names.
ReportFormat parse_report_format(const std::string& name);

/// JSON: UTF-8, sorted keys, 12 significant digits, byte-stable.
std::string emit_report(const ReportDocument& doc, ReportFormat format);
std::string emit_sweep(const SweepReport& report, ReportFormat format);

std::string_view tool_version() noexcept;

}  // namespace coevent
