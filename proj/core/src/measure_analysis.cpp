#include "coevent/measure_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "coevent/error.hpp"

namespace coevent {

namespace {

/// Canonical order on local masks: popcount, then lexicographic on the
/// ascending bit positions.
bool mask_less(std::uint64_t a, std::uint64_t b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & (~diff + 1))) != 0;
}

void sort_canonical(std::vector<std::uint64_t>& masks) { std::sort(masks.begin(), masks.end(), mask_less); }

bool is_submask(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

/// Real part of D restricted to a block, plus direct measure evaluation.
struct Block {
  std::vector<std::size_t> members;
  Eigen::MatrixXd re;

  Block(const DecoherenceFunctional& df, std::vector<std::size_t> m) : members(std::move(m)) {
    const auto n = static_cast<Eigen::Index>(members.size());
    re.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        re(i, j) = df.entry(members[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(j)]).real();
  }

  double direct_measure(std::uint64_t mask) const {
    double total = 0.0;
    for (std::uint64_t a = mask; a != 0; a &= a - 1) {
      const int i = std::countr_zero(a);
      for (std::uint64_t b = mask; b != 0; b &= b - 1) total += re(i, std::countr_zero(b));
    }
    return total;
  }
};

/// mu of every local subset, computed along a Gray code. Values close to the
/// zero threshold are recomputed directly so drift cannot flip a classification.
std::vector<double> all_subset_measures(const Block& block) {
  const std::size_t n = block.members.size();
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> mu(count, 0.0);
  std::vector<double> row_sum(n, 0.0);  // sum over j in S of Re D(x, j)
  std::uint64_t mask = 0;
  double current = 0.0;
  for (std::size_t step = 1; step < count; ++step) {
    const int bit = std::countr_zero(step);
    const std::uint64_t flag = std::uint64_t{1} << bit;
    const double diag = block.re(bit, bit);
    if (mask & flag) {
      current -= 2.0 * row_sum[static_cast<std::size_t>(bit)] - diag;
      mask &= ~flag;
      for (std::size_t x = 0; x < n; ++x) row_sum[x] -= block.re(static_cast<Eigen::Index>(x), bit);
    } else {
      current += 2.0 * row_sum[static_cast<std::size_t>(bit)] + diag;
      mask |= flag;
      for (std::size_t x = 0; x < n; ++x) row_sum[x] += block.re(static_cast<Eigen::Index>(x), bit);
    }
    double value = current;
    if (std::abs(value) <= 10.0 * kBorderlineUpper) value = block.direct_measure(mask);
    mu[mask] = value;
  }
  return mu;
}

bool nontrivial_zero(std::uint64_t z, const std::vector<double>& mu) {
  if (std::popcount(z) < 2) return false;
  // Any member with nonzero singleton measure is a witness.
  for (std::uint64_t a = z; a != 0; a &= a - 1)
    if (mu[a & (~a + 1)] > kZeroTolerance) return true;
  for (std::uint64_t s = (z - 1) & z; s != 0; s = (s - 1) & z)
    if (mu[s] > kZeroTolerance) return true;
  return false;
}

std::vector<std::uint64_t> maximal_of(std::vector<std::uint64_t> zero) {
  std::sort(zero.begin(), zero.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::popcount(a) > std::popcount(b);
  });
  std::vector<std::uint64_t> out;
  for (std::uint64_t z : zero) {
    const bool covered =
        std::any_of(out.begin(), out.end(), [z](std::uint64_t m) { return is_submask(z, m); });
    if (!covered) out.push_back(z);
  }
  sort_canonical(out);
  return out;
}

std::vector<std::uint64_t> minimal_nonempty_of(const std::vector<std::uint64_t>& sorted_family) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t z : sorted_family) {
    if (z == 0) continue;
    const bool covers =
        std::any_of(out.begin(), out.end(), [z](std::uint64_t m) { return is_submask(m, z); });
    if (!covers) out.push_back(z);
  }
  return out;
}

void require_valid(const DecoherenceFunctional& df) {
  const ValidationReport& r = df.validation();
  if (!r.ok()) {
    std::string failed;
    for (const std::string& f : r.failures()) failed += (failed.empty() ? "" : ", ") + f;
    throw Error(ErrorCode::kValidationFailed, "decoherence functional fails: " + failed);
  }
}

}  // namespace

Event SectorZeroSets::to_event(std::uint64_t local_mask) const {
  Event e(sector.universe());
  for (std::uint64_t a = local_mask; a != 0; a &= a - 1) e.insert(members[static_cast<std::size_t>(std::countr_zero(a))]);
  return e;
}

std::uint64_t SectorZeroSets::local_mask(const Event& e) const {
  std::uint64_t mask = 0;
  for (std::size_t b = 0; b < members.size(); ++b)
    if (e.contains(members[b])) mask |= std::uint64_t{1} << b;
  return mask;
}

ZeroSetCatalog::ZeroSetCatalog(std::size_t universe, bool block_structured, std::vector<SectorZeroSets> sectors,
                               std::vector<std::string> labels, Limits limits)
    : universe_(universe),
      block_structured_(block_structured),
      sectors_(std::move(sectors)),
      labels_(std::move(labels)),
      limits_(limits) {}

bool ZeroSetCatalog::is_zero(const Event& e) const {
  for (const SectorZeroSets& s : sectors_) {
    const std::uint64_t m = s.local_mask(e);
    if (std::find(s.zero.begin(), s.zero.end(), m) == s.zero.end()) return false;
  }
  return true;
}

bool ZeroSetCatalog::within_zero_event(const Event& e) const {
  for (const SectorZeroSets& s : sectors_) {
    const std::uint64_t m = s.local_mask(e);
    if (!std::any_of(s.maximal.begin(), s.maximal.end(), [m](std::uint64_t z) { return is_submask(m, z); }))
      return false;
  }
  return true;
}

bool ZeroSetCatalog::is_nontrivial(const Event& e) const {
  if (!is_zero(e)) return false;
  for (const SectorZeroSets& s : sectors_) {
    const std::uint64_t m = s.local_mask(e);
    if (std::find(s.nontrivial.begin(), s.nontrivial.end(), m) != s.nontrivial.end()) return true;
  }
  return false;
}

std::size_t ZeroSetCatalog::zero_event_count() const noexcept {
  std::size_t total = 1;
  for (const SectorZeroSets& s : sectors_) total = saturating_mul(total, s.zero.size());
  return total;
}

std::size_t ZeroSetCatalog::maximal_event_count() const noexcept {
  std::size_t total = 1;
  for (const SectorZeroSets& s : sectors_) total = saturating_mul(total, s.maximal.size());
  return total;
}

std::vector<Event> ZeroSetCatalog::assemble(const std::vector<std::uint64_t> SectorZeroSets::*family) const {
  std::size_t total = 1;
  for (const SectorZeroSets& s : sectors_) total = saturating_mul(total, (s.*family).size());
  if (total > limits_.max_materialized)
    throw Error(ErrorCode::kSpaceTooLarge, "zero-event family has " + std::to_string(total) +
                                               " members, materialization cap is " +
                                               std::to_string(limits_.max_materialized));
  std::vector<Event> out;
  out.reserve(total);
  std::vector<std::size_t> pick(sectors_.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Event e(universe_);
    for (std::size_t k = 0; k < sectors_.size(); ++k) e = e | sectors_[k].to_event((sectors_[k].*family)[pick[k]]);
    if (!e.empty()) out.push_back(std::move(e));
    for (std::size_t k = sectors_.size(); k-- > 0;) {
      if (++pick[k] < (sectors_[k].*family).size()) break;
      pick[k] = 0;
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Event> ZeroSetCatalog::zero_events() const { return assemble(&SectorZeroSets::zero); }

std::vector<Event> ZeroSetCatalog::maximal_zero_events() const { return assemble(&SectorZeroSets::maximal); }

std::vector<Event> ZeroSetCatalog::nontrivial_zero_events() const {
  std::vector<Event> all = zero_events();
  std::erase_if(all, [this](const Event& e) { return !is_nontrivial(e); });
  return all;
}

std::vector<Event> ZeroSetCatalog::minimal_zero_events() const {
  std::vector<Event> out;
  for (const SectorZeroSets& s : sectors_)
    for (std::uint64_t m : minimal_nonempty_of(s.zero)) out.push_back(s.to_event(m));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Event> ZeroSetCatalog::minimal_nontrivial_zero_events() const {
  std::vector<Event> out;
  for (const SectorZeroSets& s : sectors_)
    for (std::uint64_t m : minimal_nonempty_of(s.nontrivial)) out.push_back(s.to_event(m));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Event> ZeroSetCatalog::borderline_events() const {
  std::vector<Event> out;
  for (const SectorZeroSets& s : sectors_)
    for (std::uint64_t m : s.borderline) out.push_back(s.to_event(m));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

ZeroSetCatalog find_zero_sets(const DecoherenceFunctional& df, const Limits& limits) {
  require_valid(df);
  const std::size_t n = df.size();
  const bool blocks = has_block_structure(df);
  std::vector<SectorZeroSets> sectors;
  for (const Event& sector : final_sectors(df)) {
    SectorZeroSets s;
    s.sector = sector;
    s.members = sector.members();
    if (s.members.size() > limits.max_subset_block || s.members.size() >= 64)
      throw Error(ErrorCode::kSpaceTooLarge, "sector of " + std::to_string(s.members.size()) +
                                                 " histories exceeds the subset enumeration cap of " +
                                                 std::to_string(limits.max_subset_block));
    const Block block(df, s.members);
    const std::vector<double> mu = all_subset_measures(block);
    for (std::uint64_t m = 0; m < mu.size(); ++m) {
      if (mu[m] <= kZeroTolerance) s.zero.push_back(m);
      else if (mu[m] <= kBorderlineUpper) s.borderline.push_back(m);
    }
    sort_canonical(s.zero);
    sort_canonical(s.borderline);
    for (std::uint64_t z : s.zero)
      if (nontrivial_zero(z, mu)) s.nontrivial.push_back(z);
    s.maximal = maximal_of(s.zero);
    sectors.push_back(std::move(s));
  }
  return ZeroSetCatalog(n, blocks, std::move(sectors), df.labels(), limits);
}

ZeroSetKind classify_zero_set(const DecoherenceFunctional& df, const Event& z, const Limits& limits) {
  const double mu = measure(df, z);
  if (mu > kZeroTolerance)
    throw Error(ErrorCode::kNotAZeroSet, format_event(z, df.labels()) + " has measure " + std::to_string(mu));
  const std::vector<std::size_t> members = z.members();
  if (members.size() < 2) return ZeroSetKind::kTrivial;
  if (members.size() > limits.max_subset_block || members.size() >= 64)
    throw Error(ErrorCode::kSpaceTooLarge, "zero set too large to classify exhaustively");
  const Block block(df, members);
  const std::uint64_t full = (std::uint64_t{1} << members.size()) - 1;
  for (std::uint64_t s = (full - 1) & full; s != 0; s = (s - 1) & full)
    if (block.direct_measure(s) > kZeroTolerance) return ZeroSetKind::kNontrivial;
  return ZeroSetKind::kTrivial;
}

// ---------------------------------------------------------------------------

std::string_view to_string(DecoherenceMode mode) noexcept {
  return mode == DecoherenceMode::kWeak ? "weak" : "medium";
}

namespace {

PartitionReport evaluate_assignment(const DecoherenceFunctional& df, const std::vector<std::size_t>& cell_of,
                                    std::size_t cells, DecoherenceMode mode, bool build_cells) {
  const std::size_t n = df.size();
  ComplexMatrix cell_df = ComplexMatrix::Zero(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(cells));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cell_df(static_cast<Eigen::Index>(cell_of[i]), static_cast<Eigen::Index>(cell_of[j])) += df.entry(i, j);

  PartitionReport r;
  r.mode = mode;
  for (std::size_t a = 0; a < cells; ++a)
    for (std::size_t b = a + 1; b < cells; ++b) {
      const Complex v = cell_df(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      const double residual = mode == DecoherenceMode::kMedium ? std::abs(v) : std::abs(v.real());
      if (residual > r.max_offdiag_residual) {
        r.max_offdiag_residual = residual;
        r.worst_first = a;
        r.worst_second = b;
        r.worst_value = v;
      }
    }
  r.decoherent = r.max_offdiag_residual <= kDfTolerance;
  if (build_cells) {
    r.cells.assign(cells, Event(n));
    for (std::size_t i = 0; i < n; ++i) r.cells[cell_of[i]].insert(i);
  }
  return r;
}

}  // namespace

PartitionReport is_decoherent_partition(const DecoherenceFunctional& df, const std::vector<Event>& partition,
                                        DecoherenceMode mode) {
  const std::size_t n = df.size();
  if (partition.empty()) throw Error(ErrorCode::kInvalidPartition, "partition has no cells");
  std::vector<std::size_t> cell_of(n, partition.size());
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const Event& cell = partition[c];
    if (cell.universe() != n) throw Error(ErrorCode::kInvalidPartition, "cell belongs to another history space");
    if (cell.empty()) throw Error(ErrorCode::kInvalidPartition, "partition has an empty cell");
    for (std::size_t i : cell.members()) {
      if (cell_of[i] != partition.size())
        throw Error(ErrorCode::kInvalidPartition, "cells overlap at history " + df.labels()[i]);
      cell_of[i] = c;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (cell_of[i] == partition.size())
      throw Error(ErrorCode::kInvalidPartition, "history " + df.labels()[i] + " is not covered");
  PartitionReport r = evaluate_assignment(df, cell_of, partition.size(), mode, false);
  r.cells = partition;
  return r;
}

std::vector<PartitionReport> find_decoherent_partitions(const DecoherenceFunctional& df, DecoherenceMode mode,
                                                        std::size_t max_cells) {
  const std::size_t n = df.size();
  if (n > kMaxPartitionSearch)
    throw Error(ErrorCode::kSpaceTooLarge, "partition search needs |Omega| <= " + std::to_string(kMaxPartitionSearch));
  if (max_cells == 0) return {};
  std::vector<PartitionReport> out;

  // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  while (true) {
    const std::size_t cells = prefix_max[n - 1] + 1;
    PartitionReport r = evaluate_assignment(df, rgs, cells, mode, false);
    if (r.decoherent) {
      r = evaluate_assignment(df, rgs, cells, mode, true);
      out.push_back(std::move(r));
    }
    // Advance to the next string with at most max_cells distinct values.
    std::size_t i = n;
    while (i-- > 1) {
      const std::size_t limit = std::min(prefix_max[i - 1] + 1, max_cells - 1);
      if (rgs[i] < limit) break;
    }
    if (i == 0 || i >= n) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      rgs[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
  return out;
}

}  // namespace coevent
