#pragma once

#include <string>
#include <vector>

#include "coevent/event.hpp"
#include "coevent/histories.hpp"
#include "coevent/measure_analysis.hpp"

namespace coevent {

/// Multiplicative co-event: the characteristic map of its support,
/// phi(B) = 1 iff support ⊆ B.
struct CoEvent {
  Event support;

  bool classical() const { return support.count() == 1; }
  bool operator==(const CoEvent&) const = default;
};

/// Primitive preclusive multiplicative co-events of one decoherence functional.
struct CoEventSet {
  std::string initial_state_label;
  std::vector<std::string> history_labels;
  /// Final-slice outcome per history and outcome labels; empty for raw functionals.
  std::vector<std::size_t> final_outcome_of;
  std::vector<std::string> final_outcome_labels;
  /// Canonical event order of the supports.
  std::vector<CoEvent> coevents;
  /// Cost warnings raised during enumeration.
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return coevents.size(); }
  bool contains(const Event& support) const;
};

bool evaluate(const CoEvent& c, const Event& e);

/// True iff support is not contained in any zero event. Throws kEmptySupport.
bool is_preclusive(const Event& support, const ZeroSetCatalog& catalog);

/// Inclusion-minimal nonempty preclusive supports. A support is preclusive
/// iff one of its sector parts is, so minimal supports lie in a single
/// sector and are found per sector by increasing cardinality with superset
/// pruning. Without block structure the whole space is scanned, capped at
/// limits.max_subset_block histories.
CoEventSet enumerate_primitive_coevents(const DecoherenceFunctional& df, const ZeroSetCatalog& catalog,
                                        std::string initial_state_label = {});
CoEventSet enumerate_primitive_coevents(const DecoherenceFunctional& df, const Limits& limits = {},
                                        std::string initial_state_label = {});

/// Supports present in every set, canonical order. Sets must share history
/// labels (kLabelMismatch otherwise). An empty list yields no supports.
std::vector<Event> intersect_coevent_sets(const std::vector<CoEventSet>& sets);

struct PairwiseOverlap {
  std::size_t first = 0;
  std::size_t second = 0;
  std::vector<Event> shared;
};

struct DistinguishabilityReport {
  std::vector<std::string> initial_state_labels;
  std::vector<std::string> history_labels;
  std::vector<PairwiseOverlap> pairwise;
  std::vector<Event> shared_by_all;
  /// admissible[s][f]: some co-event of state s has its support ending at
  /// final outcome f. Empty when the sets carry no final-outcome data.
  std::vector<std::string> final_outcome_labels;
  std::vector<std::vector<bool>> admissible;

  bool all_disjoint() const noexcept { return shared_by_all.empty(); }
};

/// Needs at least two sets (kMalformedInput otherwise).
DistinguishabilityReport distinguishability_report(const std::vector<CoEventSet>& sets);

}  // namespace coevent
