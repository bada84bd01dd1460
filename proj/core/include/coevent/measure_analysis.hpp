#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coevent/event.hpp"
#include "coevent/histories.hpp"
#include "coevent/tolerance.hpp"

namespace coevent {

/// Zero events inside one final sector. Masks are local: bit b stands for
/// members[b]. Every list is in canonical event order.
struct SectorZeroSets {
  Event sector;
  std::vector<std::size_t> members;
  std::vector<std::uint64_t> zero;        // mu <= kZeroTolerance, empty set included
  std::vector<std::uint64_t> maximal;     // inclusion-maximal elements of `zero`
  std::vector<std::uint64_t> nontrivial;  // zero events with a proper subset of nonzero measure
  std::vector<std::uint64_t> borderline;  // kZeroTolerance < mu <= kBorderlineUpper

  Event to_event(std::uint64_t local_mask) const;
  /// Local mask of e restricted to this sector.
  std::uint64_t local_mask(const Event& e) const;
};

/// All measure-zero events of a decoherence functional.
///
/// With block structure, a global event is a zero event exactly when each of
/// its sector parts is one: sectors do not interfere, so the measure is the
/// sum of the sector measures, each of which is nonnegative. The catalog
/// therefore stores zero events per sector and assembles global ones as
/// unions. Without block structure the whole space is a single sector.
class ZeroSetCatalog {
 public:
  ZeroSetCatalog(std::size_t universe, bool block_structured, std::vector<SectorZeroSets> sectors,
                 std::vector<std::string> labels, Limits limits);

  std::size_t universe() const noexcept { return universe_; }
  bool block_structured() const noexcept { return block_structured_; }
  const std::vector<SectorZeroSets>& sectors() const noexcept { return sectors_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool is_zero(const Event& e) const;
  /// True when e is a subset of some zero event.
  bool within_zero_event(const Event& e) const;
  /// True when e is a zero event with a proper nonempty subset of nonzero measure.
  bool is_nontrivial(const Event& e) const;

  /// Number of global zero events, the empty event included; saturates.
  std::size_t zero_event_count() const noexcept;
  std::size_t maximal_event_count() const noexcept;

  /// Materialized global families, nonempty events only, canonical order.
  /// Throw kSpaceTooLarge when the family exceeds limits.max_materialized.
  std::vector<Event> zero_events() const;
  std::vector<Event> maximal_zero_events() const;
  std::vector<Event> nontrivial_zero_events() const;

  /// Inclusion-minimal nonempty zero events; each lies in a single sector.
  std::vector<Event> minimal_zero_events() const;
  /// Inclusion-minimal non-trivial zero events; each lies in a single sector.
  std::vector<Event> minimal_nontrivial_zero_events() const;
  /// Sector events whose measure falls in the borderline band.
  std::vector<Event> borderline_events() const;

 private:
  /// Unions of one choice per sector, empty union dropped, canonical order.
  std::vector<Event> assemble(const std::vector<std::uint64_t> SectorZeroSets::*family) const;

  std::size_t universe_;
  bool block_structured_;
  std::vector<SectorZeroSets> sectors_;
  std::vector<std::string> labels_;
  Limits limits_;
};

/// Throws kValidationFailed when the functional fails its axioms and
/// kSpaceTooLarge when a sector exceeds limits.max_subset_block.
ZeroSetCatalog find_zero_sets(const DecoherenceFunctional& df, const Limits& limits = {});

enum class ZeroSetKind { kTrivial, kNontrivial };

/// Throws kNotAZeroSet when mu(z) > kZeroTolerance.
ZeroSetKind classify_zero_set(const DecoherenceFunctional& df, const Event& z, const Limits& limits = {});

enum class DecoherenceMode { kWeak, kMedium };

std::string_view to_string(DecoherenceMode mode) noexcept;

struct PartitionReport {
  std::vector<Event> cells;
  DecoherenceMode mode = DecoherenceMode::kMedium;
  /// Medium: max |D(A_i, A_j)|; weak: max |Re D(A_i, A_j)|, over i != j.
  double max_offdiag_residual = 0.0;
  /// Cell indices of the pair attaining the residual (equal when there is one cell).
  std::size_t worst_first = 0;
  std::size_t worst_second = 0;
  Complex worst_value{0.0, 0.0};
  bool decoherent = true;
};

/// Throws kInvalidPartition unless the cells are nonempty, pairwise disjoint
/// and cover Omega.
PartitionReport is_decoherent_partition(const DecoherenceFunctional& df, const std::vector<Event>& partition,
                                        DecoherenceMode mode);

/// Every partition of Omega into at most max_cells cells that passes the
/// mode's condition, in restricted-growth-string order. Throws
/// kSpaceTooLarge when |Omega| > 16.
std::vector<PartitionReport> find_decoherent_partitions(const DecoherenceFunctional& df, DecoherenceMode mode,
                                                        std::size_t max_cells);

inline constexpr std::size_t kMaxPartitionSearch = 16;

}  // namespace coevent
