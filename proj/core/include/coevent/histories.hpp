#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coevent/event.hpp"
#include "coevent/linalg.hpp"
#include "coevent/tolerance.hpp"

namespace coevent {

/// One moment of time: the evolution applied since the previous slice, then
/// a complete set of alternatives.
struct TimeSlice {
  ComplexMatrix evolution;
  ProjectiveDecomposition decomposition;

  /// Slice with trivial evolution.
  static TimeSlice unevolved(ProjectiveDecomposition decomposition);
};

/// Initial state plus ordered time slices. Pure initial states are kept both
/// as the ket and as the rank-1 density matrix.
class HistorySchema {
 public:
  static HistorySchema pure(Ket initial, std::vector<TimeSlice> slices,
                            std::vector<std::string> history_labels = {});
  static HistorySchema mixed(ComplexMatrix rho, std::vector<TimeSlice> slices,
                             std::vector<std::string> history_labels = {});

  std::size_t dim() const noexcept { return dim_; }
  const ComplexMatrix& rho() const noexcept { return rho_; }
  const std::optional<Ket>& initial_ket() const noexcept { return ket_; }
  bool is_pure() const noexcept { return ket_.has_value(); }
  const std::vector<TimeSlice>& slices() const noexcept { return slices_; }
  /// Explicit per-history labels in enumeration order; empty means labels are
  /// derived from slice labels.
  const std::vector<std::string>& history_labels() const noexcept { return history_labels_; }

  /// Product of slice outcome counts, saturating at SIZE_MAX.
  std::size_t history_count() const noexcept;

 private:
  HistorySchema() = default;
  void validate() const;

  std::size_t dim_ = 0;
  ComplexMatrix rho_;
  std::optional<Ket> ket_;
  std::vector<TimeSlice> slices_;
  std::vector<std::string> history_labels_;
};

using OutcomeTuple = std::vector<std::size_t>;

/// Fine-grained histories, ordered lexicographically by (slice 1 outcome,
/// slice 2 outcome, ...). Default labels are "h_" followed by the slice
/// labels concatenated in time order, e.g. "h_00xi2".
struct HistorySpace {
  std::vector<OutcomeTuple> histories;
  std::vector<std::string> labels;
  std::vector<std::size_t> radices;

  std::size_t size() const noexcept { return histories.size(); }
  std::size_t final_outcome(std::size_t history) const { return histories.at(history).back(); }
};

/// Throws kSpaceTooLarge when |Omega| exceeds limits.max_histories.
HistorySpace enumerate_histories(const HistorySchema& schema, const Limits& limits = {});

/// C = P_n U_n ... P_2 U_2 P_1 U_1 (earliest slice rightmost). Throws kIndexOutOfRange.
ComplexMatrix class_operator(const HistorySchema& schema, const OutcomeTuple& history);

/// <f| C |psi> where |f> spans the final-slice projector of the history.
/// Throws kMixedInitialState or kFinalSliceNotRankOne.
Complex amplitude(const HistorySchema& schema, const OutcomeTuple& history);

struct ValidationReport {
  double hermiticity_residual = 0.0;
  double normalization_residual = 0.0;
  double min_eigenvalue = 0.0;
  double bilinearity_residual = 0.0;
  bool block_applicable = false;
  double block_residual = 0.0;

  bool finite = true;
  bool hermitian = true;
  bool normalized = true;
  bool strongly_positive = true;
  bool bilinear = true;
  bool block_structured = true;

  bool ok() const noexcept {
    return finite && hermitian && normalized && strongly_positive && bilinear && block_structured;
  }
  /// Names of the failed checks, in a fixed order.
  std::vector<std::string> failures() const;
};

/// |Omega| x |Omega| matrix D(h_i, h_j), extended bilinearly to events.
/// The first argument carries the adjoint: D(A, B) = Tr(C_A† C_B ρ).
class DecoherenceFunctional {
 public:
  /// Raw ingestion. Labels default to "h1".."hn". No sector information.
  /// Throws kMalformedInput for non-square, empty or non-finite input.
  static DecoherenceFunctional from_matrix(ComplexMatrix entries, std::vector<std::string> labels = {});

  /// Full constructor used by builders that know the final-slice outcome of
  /// every history. final_outcome_of may be empty.
  DecoherenceFunctional(ComplexMatrix entries, std::vector<std::string> labels,
                        std::vector<std::size_t> final_outcome_of,
                        std::vector<std::string> final_outcome_labels);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  Complex entry(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool has_sector_info() const noexcept { return !final_outcome_of_.empty(); }
  const std::vector<std::size_t>& final_outcome_of() const noexcept { return final_outcome_of_; }
  const std::vector<std::string>& final_outcome_labels() const noexcept { return final_outcome_labels_; }

  const ValidationReport& validation() const noexcept { return validation_; }

 private:
  ComplexMatrix entries_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> final_outcome_of_;
  std::vector<std::string> final_outcome_labels_;
  ValidationReport validation_;
};

DecoherenceFunctional build_df(const HistorySchema& schema, const Limits& limits = {});

/// D(A, B) = sum over i in A, j in B of D(h_i, h_j).
Complex functional(const DecoherenceFunctional& df, const Event& a, const Event& b);

/// mu(A) = Re D(A, A). Exactly 0 for the empty event. Throws
/// kImaginaryResidue when Im D(A, A) exceeds kDfTolerance.
double measure(const DecoherenceFunctional& df, const Event& event);

ValidationReport validate_df(const DecoherenceFunctional& df);

/// Histories grouped by final-slice outcome when block structure holds,
/// otherwise the single sector Omega. Empty sectors are omitted.
std::vector<Event> final_sectors(const DecoherenceFunctional& df);

/// True when final_sectors() returns more than a single all-histories sector
/// because of verified block structure.
bool has_block_structure(const DecoherenceFunctional& df);

}  // namespace coevent
