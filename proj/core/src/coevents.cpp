#include "coevent/coevents.hpp"

#include <algorithm>
#include <bit>

#include "coevent/error.hpp"

namespace coevent {

namespace {

bool is_submask(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

/// Next integer with the same popcount (Gosper's hack).
std::uint64_t next_same_popcount(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

std::vector<std::uint64_t> minimal_preclusive_in_sector(const SectorZeroSets& s) {
  const std::size_t n = s.members.size();
  const std::uint64_t end = std::uint64_t{1} << n;
  std::vector<std::uint64_t> accepted;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t before = accepted.size();
    for (std::uint64_t m = (std::uint64_t{1} << k) - 1; m < end; m = next_same_popcount(m)) {
      const bool dominated = std::any_of(accepted.begin(), accepted.begin() + static_cast<std::ptrdiff_t>(before),
                                         [m](std::uint64_t a) { return is_submask(a, m); });
      if (dominated) continue;
      const bool precluded =
          std::any_of(s.maximal.begin(), s.maximal.end(), [m](std::uint64_t z) { return is_submask(m, z); });
      if (!precluded) accepted.push_back(m);
      if (k == n) break;
    }
  }
  return accepted;
}

void check_same_space(const CoEventSet& a, const CoEventSet& b) {
  if (a.history_labels != b.history_labels)
    throw Error(ErrorCode::kLabelMismatch, "co-event sets '" + a.initial_state_label + "' and '" +
                                               b.initial_state_label + "' are over different history spaces");
}

}  // namespace

bool CoEventSet::contains(const Event& support) const {
  return std::any_of(coevents.begin(), coevents.end(), [&](const CoEvent& c) { return c.support == support; });
}

bool evaluate(const CoEvent& c, const Event& e) { return c.support.is_subset_of(e); }

bool is_preclusive(const Event& support, const ZeroSetCatalog& catalog) {
  if (support.empty()) throw Error(ErrorCode::kEmptySupport, "co-event support must be nonempty");
  if (support.universe() != catalog.universe())
    throw Error(ErrorCode::kLabelMismatch, "support and catalog belong to different history spaces");
  return !catalog.within_zero_event(support);
}

CoEventSet enumerate_primitive_coevents(const DecoherenceFunctional& df, const ZeroSetCatalog& catalog,
                                        std::string initial_state_label) {
  if (catalog.universe() != df.size())
    throw Error(ErrorCode::kLabelMismatch, "catalog does not belong to this decoherence functional");
  CoEventSet out;
  out.initial_state_label = std::move(initial_state_label);
  out.history_labels = df.labels();
  if (df.has_sector_info()) {
    out.final_outcome_of = df.final_outcome_of();
    out.final_outcome_labels = df.final_outcome_labels();
  }
  if (!catalog.block_structured() && df.size() > 12)
    out.warnings.push_back("no block structure: scanning all 2^" + std::to_string(df.size()) + " supports");

  for (const SectorZeroSets& s : catalog.sectors())
    for (std::uint64_t m : minimal_preclusive_in_sector(s)) out.coevents.push_back(CoEvent{s.to_event(m)});
  std::sort(out.coevents.begin(), out.coevents.end(),
            [](const CoEvent& a, const CoEvent& b) { return canonical_less(a.support, b.support); });
  return out;
}

CoEventSet enumerate_primitive_coevents(const DecoherenceFunctional& df, const Limits& limits,
                                        std::string initial_state_label) {
  return enumerate_primitive_coevents(df, find_zero_sets(df, limits), std::move(initial_state_label));
}

std::vector<Event> intersect_coevent_sets(const std::vector<CoEventSet>& sets) {
  if (sets.empty()) return {};
  for (std::size_t k = 1; k < sets.size(); ++k) check_same_space(sets.front(), sets[k]);
  std::vector<Event> out;
  for (const CoEvent& c : sets.front().coevents) {
    const bool everywhere = std::all_of(sets.begin() + 1, sets.end(),
                                        [&](const CoEventSet& s) { return s.contains(c.support); });
    if (everywhere) out.push_back(c.support);
  }
  return out;
}

DistinguishabilityReport distinguishability_report(const std::vector<CoEventSet>& sets) {
  if (sets.size() < 2)
    throw Error(ErrorCode::kMalformedInput, "distinguishability needs at least two co-event sets");
  DistinguishabilityReport r;
  for (const CoEventSet& s : sets) r.initial_state_labels.push_back(s.initial_state_label);
  r.history_labels = sets.front().history_labels;
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      r.pairwise.push_back(PairwiseOverlap{a, b, intersect_coevent_sets({sets[a], sets[b]})});
  r.shared_by_all = intersect_coevent_sets(sets);

  const CoEventSet& first = sets.front();
  const bool have_outcomes = std::all_of(sets.begin(), sets.end(), [&](const CoEventSet& s) {
    return !s.final_outcome_of.empty() && s.final_outcome_of == first.final_outcome_of &&
           s.final_outcome_labels == first.final_outcome_labels;
  });
  if (have_outcomes) {
    r.final_outcome_labels = first.final_outcome_labels;
    for (const CoEventSet& s : sets) {
      std::vector<bool> row(r.final_outcome_labels.size(), false);
      for (const CoEvent& c : s.coevents)
        for (std::size_t h : c.support.members()) row[s.final_outcome_of[h]] = true;
      r.admissible.push_back(std::move(row));
    }
  }
  return r;
}

}  // namespace coevent
