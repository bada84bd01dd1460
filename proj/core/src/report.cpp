#include <cstdio>
#include <sstream>

#include "coevent/error.hpp"
#include "coevent/scenarios.hpp"
#include "json_detail.hpp"

#ifndef COEVENT_VERSION
#define COEVENT_VERSION "0.0.0"
#endif

namespace coevent {

std::string_view tool_version() noexcept { return COEVENT_VERSION; }

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "text") return ReportFormat::kText;
  throw Error(ErrorCode::kMalformedInput, "unknown report format '" + name + "'");
}

namespace {

using detail::Json;
using detail::to_json;

Json event_json(const Event& e, const std::vector<std::string>& labels) { return event_labels(e, labels); }

Json events_json(const std::vector<Event>& events, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const Event& e : events) out.push_back(event_json(e, labels));
  return out;
}

Json partition_json(const PartitionReport& p, const std::vector<std::string>& labels) {
  Json j;
  j["cells"] = events_json(p.cells, labels);
  j["mode"] = std::string(to_string(p.mode));
  j["max_offdiag_residual"] = p.max_offdiag_residual;
  j["worst_pair"] = Json::array({p.worst_first, p.worst_second});
  j["worst_value"] = to_json(p.worst_value);
  j["decoherent"] = p.decoherent;
  return j;
}

Json validation_json(const ValidationReport& v) {
  Json j;
  j["ok"] = v.ok();
  j["failures"] = v.failures();
  j["hermiticity_residual"] = v.hermiticity_residual;
  j["normalization_residual"] = v.normalization_residual;
  j["min_eigenvalue"] = v.min_eigenvalue;
  j["bilinearity_residual"] = v.bilinearity_residual;
  j["block_applicable"] = v.block_applicable;
  j["block_residual"] = v.block_residual;
  j["block_structured"] = v.block_structured;
  return j;
}

Json tolerances_json() {
  Json j;
  j["unit"] = kUnitTolerance;
  j["df"] = kDfTolerance;
  j["zero"] = kZeroTolerance;
  j["borderline_upper"] = kBorderlineUpper;
  return j;
}

Json candidate_json(const CandidateReport& c) {
  const auto& labels = c.history_labels;
  Json j;
  j["label"] = c.label;
  Json histories = Json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Json h;
    h["label"] = labels[i];
    h["measure"] = c.measures[i];
    if (!c.amplitudes.empty()) h["amplitude"] = to_json(c.amplitudes[i]);
    histories.push_back(std::move(h));
  }
  j["histories"] = std::move(histories);
  Json sectors = Json::array();
  for (const auto& [label, mu] : c.sector_measures) sectors.push_back({{"final_outcome", label}, {"measure", mu}});
  j["sector_measures"] = std::move(sectors);
  j["validation"] = validation_json(c.validation);

  Json z;
  z["count"] = c.zero_sets.count;
  z["minimal"] = events_json(c.zero_sets.minimal, labels);
  z["minimal_nontrivial"] = events_json(c.zero_sets.minimal_nontrivial, labels);
  z["maximal"] = c.zero_sets.maximal_materialized ? events_json(c.zero_sets.maximal, labels) : Json(nullptr);
  z["borderline"] = events_json(c.zero_sets.borderline, labels);
  j["zero_sets"] = std::move(z);

  Json co = Json::array();
  for (const CoEvent& e : c.coevents.coevents) co.push_back(event_json(e.support, labels));
  j["coevents"] = std::move(co);
  std::size_t classical = 0;
  for (const CoEvent& e : c.coevents.coevents) classical += e.classical() ? 1 : 0;
  j["classical_coevents"] = classical;
  j["warnings"] = c.coevents.warnings;

  if (labels.size() <= kReportPartitionLimit) {
    Json parts;
    Json medium = Json::array();
    for (const PartitionReport& p : c.medium_partitions) medium.push_back(partition_json(p, labels));
    Json weak = Json::array();
    for (const PartitionReport& p : c.weak_partitions) weak.push_back(partition_json(p, labels));
    parts["medium"] = std::move(medium);
    parts["weak"] = std::move(weak);
    j["decoherent_partitions"] = std::move(parts);
  }
  return j;
}

Json distinguishability_json(const DistinguishabilityReport& d) {
  const auto& labels = d.history_labels;
  Json j;
  j["initial_states"] = d.initial_state_labels;
  j["shared_by_all"] = events_json(d.shared_by_all, labels);
  j["all_disjoint"] = d.all_disjoint();
  Json pairs = Json::array();
  for (const PairwiseOverlap& p : d.pairwise) {
    pairs.push_back({{"first", d.initial_state_labels[p.first]},
                     {"second", d.initial_state_labels[p.second]},
                     {"shared", events_json(p.shared, labels)}});
  }
  j["pairwise"] = std::move(pairs);
  if (!d.final_outcome_labels.empty()) {
    Json table = Json::array();
    for (std::size_t s = 0; s < d.admissible.size(); ++s) {
      Json row;
      row["initial_state"] = d.initial_state_labels[s];
      Json cells = Json::object();
      for (std::size_t f = 0; f < d.final_outcome_labels.size(); ++f) cells[d.final_outcome_labels[f]] = bool(d.admissible[s][f]);
      row["final_outcomes"] = std::move(cells);
      table.push_back(std::move(row));
    }
    j["admissibility"] = std::move(table);
  }
  return j;
}

Json composition_json(const CompositionSection& c) {
  const auto& labels = c.product_labels;
  Json j;
  j["factors"] = Json::array({c.first, c.second});
  j["product_labels"] = labels;
  j["product_entries"] = to_json(c.product_entries);
  j["emergent_zero"] = events_json(c.emergent_zero, labels);
  j["minimal_emergent_zero"] = events_json(c.minimal_emergent_zero, labels);
  Json weak = Json::array();
  for (const WeakViolation& w : c.weak_violations) weak.push_back(partition_json(w.product, labels));
  j["weak_violations"] = std::move(weak);
  return j;
}

Json report_json(const ReportDocument& doc) {
  Json j;
  j["scenario"] = doc.scenario;
  j["parameters"] = Json::object();
  for (const auto& [key, value] : doc.parameters) j["parameters"][key] = value;
  j["tool_version"] = doc.tool_version;
  j["tolerances"] = tolerances_json();
  Json candidates = Json::array();
  for (const CandidateReport& c : doc.candidates) candidates.push_back(candidate_json(c));
  j["candidates"] = std::move(candidates);
  j["distinguishability"] = doc.distinguishability ? distinguishability_json(*doc.distinguishability) : Json(nullptr);
  j["composition"] = doc.composition ? composition_json(*doc.composition) : Json(nullptr);
  j["notes"] = doc.notes;
  return j;
}

Json sweep_point_json(const SweepPoint& p) {
  Json j;
  j["theta"] = p.theta;
  j["disjoint"] = p.disjoint;
  j["degenerate"] = p.degenerate;
  j["coevent_counts"] = p.coevent_counts;
  j["zero_counts"] = p.zero_counts;
  j["borderline_counts"] = p.borderline_counts;
  j["structural_change"] = p.structural_change;
  j["flags"] = p.flags;
  return j;
}

Json sweep_json(const SweepReport& r) {
  Json j;
  j["scenario"] = "appendix-theta";
  j["start"] = r.start;
  j["end"] = r.end;
  j["steps"] = r.steps;
  j["tool_version"] = r.tool_version;
  j["tolerances"] = tolerances_json();
  Json points = Json::array();
  for (const SweepPoint& p : r.points) points.push_back(sweep_point_json(p));
  j["points"] = std::move(points);
  Json special = Json::array();
  for (const SpecialAngle& s : r.special_angles) {
    special.push_back({{"name", s.name},
                       {"theta", s.theta},
                       {"primary", s.primary},
                       {"bracket", Json::array({s.lower_index, s.upper_index})},
                       {"exact", sweep_point_json(s.exact)}});
  }
  j["special_angles"] = std::move(special);
  j["notes"] = r.notes;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt(Complex z) {
  std::string out = fmt(z.real());
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  out += im < 0 ? " - " : " + ";
  out += fmt(std::abs(im)) + "i";
  return out;
}

std::string join_events(const std::vector<Event>& events, const std::vector<std::string>& labels) {
  if (events.empty()) return "(none)";
  std::string out;
  for (const Event& e : events) {
    if (!out.empty()) out += " ";
    out += format_event(e, labels);
  }
  return out;
}

std::string report_text(const ReportDocument& doc) {
  std::ostringstream os;
  os << "scenario " << doc.scenario;
  for (const auto& [key, value] : doc.parameters) os << "  " << key << "=" << fmt(value);
  os << "\ncoevent " << doc.tool_version << "  eps_df=" << fmt(kDfTolerance) << " eps_zero=" << fmt(kZeroTolerance)
     << "\n";
  for (const CandidateReport& c : doc.candidates) {
    const auto& labels = c.history_labels;
    os << "\n[" << c.label << "] " << labels.size() << " histories, validation "
       << (c.validation.ok() ? "ok" : "FAILED") << "\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      os << "  " << labels[i] << "  mu=" << fmt(c.measures[i]);
      if (!c.amplitudes.empty()) os << "  amp=" << fmt(c.amplitudes[i]);
      os << "\n";
    }
    os << "  zero events: " << c.zero_sets.count << "\n";
    os << "  minimal zero: " << join_events(c.zero_sets.minimal, labels) << "\n";
    os << "  minimal non-trivial zero: " << join_events(c.zero_sets.minimal_nontrivial, labels) << "\n";
    if (!c.zero_sets.borderline.empty()) os << "  borderline: " << join_events(c.zero_sets.borderline, labels) << "\n";
    std::vector<Event> supports;
    for (const CoEvent& e : c.coevents.coevents) supports.push_back(e.support);
    os << "  co-events (" << supports.size() << "): " << join_events(supports, labels) << "\n";
    for (const std::string& w : c.coevents.warnings) os << "  warning: " << w << "\n";
  }
  if (doc.distinguishability) {
    const DistinguishabilityReport& d = *doc.distinguishability;
    os << "\nshared by all: " << join_events(d.shared_by_all, d.history_labels) << "\n";
    if (!d.final_outcome_labels.empty()) {
      os << "admissible final outcomes:\n";
      for (std::size_t s = 0; s < d.admissible.size(); ++s) {
        os << "  " << d.initial_state_labels[s] << ":";
        for (std::size_t f = 0; f < d.final_outcome_labels.size(); ++f)
          os << " " << d.final_outcome_labels[f] << (d.admissible[s][f] ? "=yes" : "=no");
        os << "\n";
      }
    }
  }
  if (doc.composition) {
    const CompositionSection& c = *doc.composition;
    os << "\ncomposition " << c.first << " x " << c.second << "\n";
    os << "  emergent zero: " << join_events(c.minimal_emergent_zero, c.product_labels) << "\n";
    for (const WeakViolation& w : c.weak_violations) {
      os << "  weak violation: Re D = " << fmt(w.product.worst_value.real()) << " between "
         << format_event(w.product.cells[w.product.worst_first], c.product_labels) << " and "
         << format_event(w.product.cells[w.product.worst_second], c.product_labels) << "\n";
    }
  }
  for (const std::string& n : doc.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string counts(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t x : v) out += (out.empty() ? "" : "/") + std::to_string(x);
  return out;
}

std::string sweep_text(const SweepReport& r) {
  std::ostringstream os;
  os << "appendix-theta sweep " << fmt(r.start) << " .. " << fmt(r.end) << " (" << r.steps << " points)\n";
  os << "theta        disjoint  coevents  zeros  flags\n";
  for (const SweepPoint& p : r.points) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12.6f %-9s %-9s %-6s", p.theta, p.disjoint ? "yes" : "NO",
                  counts(p.coevent_counts).c_str(), counts(p.zero_counts).c_str());
    os << line;
    for (const std::string& f : p.flags) os << " " << f;
    if (p.structural_change) os << " *change*";
    if (p.degenerate) os << " degenerate";
    os << "\n";
  }
  os << "special angles:\n";
  for (const SpecialAngle& s : r.special_angles) {
    os << "  " << s.name << " theta=" << fmt(s.theta) << " disjoint=" << (s.exact.disjoint ? "yes" : "NO")
       << " coevents=" << counts(s.exact.coevent_counts) << " zeros=" << counts(s.exact.zero_counts) << "\n";
  }
  return os.str();
}

}  // namespace

std::string emit_report(const ReportDocument& doc, ReportFormat format) {
  return format == ReportFormat::kJson ? detail::dump_stable(report_json(doc)) : report_text(doc);
}

std::string emit_sweep(const SweepReport& report, ReportFormat format) {
  return format == ReportFormat::kJson ? detail::dump_stable(sweep_json(report)) : sweep_text(report);
}

}  // namespace coevent
