#include "coevent/histories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "coevent/error.hpp"

namespace coevent {

TimeSlice TimeSlice::unevolved(ProjectiveDecomposition decomposition) {
  const auto n = static_cast<Eigen::Index>(decomposition.dim());
  return TimeSlice{ComplexMatrix::Identity(n, n), std::move(decomposition)};
}

HistorySchema HistorySchema::pure(Ket initial, std::vector<TimeSlice> slices,
                                  std::vector<std::string> history_labels) {
  if (!is_normalized(initial, kUnitTolerance))
    throw Error(ErrorCode::kValidationFailed, "initial ket is not normalized");
  HistorySchema s;
  s.dim_ = static_cast<std::size_t>(initial.size());
  s.rho_ = outer(initial);
  s.ket_ = std::move(initial);
  s.slices_ = std::move(slices);
  s.history_labels_ = std::move(history_labels);
  s.validate();
  return s;
}

HistorySchema HistorySchema::mixed(ComplexMatrix rho, std::vector<TimeSlice> slices,
                                   std::vector<std::string> history_labels) {
  HistorySchema s;
  s.dim_ = static_cast<std::size_t>(rho.rows());
  s.rho_ = std::move(rho);
  s.slices_ = std::move(slices);
  s.history_labels_ = std::move(history_labels);
  s.validate();
  return s;
}

void HistorySchema::validate() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (dim_ == 0) throw Error(ErrorCode::kMalformedInput, "schema dimension must be positive");
  if (rho_.rows() != n || rho_.cols() != n)
    throw Error(ErrorCode::kMalformedInput, "initial density matrix must be square");
  if (!is_hermitian(rho_, kUnitTolerance))
    throw Error(ErrorCode::kValidationFailed, "initial density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > kUnitTolerance)
    throw Error(ErrorCode::kValidationFailed, "initial density matrix does not have unit trace");
  if (min_eigenvalue_hermitian(rho_) < -kUnitTolerance)
    throw Error(ErrorCode::kValidationFailed, "initial density matrix is not positive semidefinite");
  if (slices_.empty()) throw Error(ErrorCode::kMalformedInput, "schema needs at least one time slice");
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    const TimeSlice& s = slices_[k];
    if (s.decomposition.dim() != dim_ || s.evolution.rows() != n || s.evolution.cols() != n)
      throw Error(ErrorCode::kMalformedInput, "slice " + std::to_string(k + 1) + " has the wrong dimension");
    if (!is_unitary(s.evolution, kUnitTolerance))
      throw Error(ErrorCode::kNotUnitary, "evolution before slice " + std::to_string(k + 1) + " is not unitary");
  }
  if (!history_labels_.empty() && history_labels_.size() != history_count())
    throw Error(ErrorCode::kMalformedInput, "history label count does not match the number of histories");
}

std::size_t HistorySchema::history_count() const noexcept {
  std::size_t total = 1;
  for (const TimeSlice& s : slices_) {
    const std::size_t m = s.decomposition.size();
    if (m != 0 && total > std::numeric_limits<std::size_t>::max() / m)
      return std::numeric_limits<std::size_t>::max();
    total *= m;
  }
  return total;
}

HistorySpace enumerate_histories(const HistorySchema& schema, const Limits& limits) {
  const std::size_t total = schema.history_count();
  if (total > limits.max_histories)
    throw Error(ErrorCode::kSpaceTooLarge, "history space has " + std::to_string(total) +
                                               " histories, cap is " + std::to_string(limits.max_histories));
  HistorySpace space;
  for (const TimeSlice& s : schema.slices()) space.radices.push_back(s.decomposition.size());
  space.histories.reserve(total);
  space.labels.reserve(total);

  OutcomeTuple current(space.radices.size(), 0);
  for (std::size_t h = 0; h < total; ++h) {
    space.histories.push_back(current);
    if (schema.history_labels().empty()) {
      std::string label = "h_";
      for (std::size_t k = 0; k < current.size(); ++k)
        label += schema.slices()[k].decomposition.label(current[k]);
      space.labels.push_back(std::move(label));
    } else {
      space.labels.push_back(schema.history_labels()[h]);
    }
    // Odometer with the last slice varying fastest.
    for (std::size_t k = current.size(); k-- > 0;) {
      if (++current[k] < space.radices[k]) break;
      current[k] = 0;
    }
  }
  return space;
}

namespace {

void check_tuple(const HistorySchema& schema, const OutcomeTuple& history) {
  if (history.size() != schema.slices().size())
    throw Error(ErrorCode::kIndexOutOfRange, "outcome tuple length does not match the slice count");
  for (std::size_t k = 0; k < history.size(); ++k)
    if (history[k] >= schema.slices()[k].decomposition.size())
      throw Error(ErrorCode::kIndexOutOfRange, "outcome index out of range at slice " + std::to_string(k + 1));
}

}  // namespace

ComplexMatrix class_operator(const HistorySchema& schema, const OutcomeTuple& history) {
  check_tuple(schema, history);
  const auto n = static_cast<Eigen::Index>(schema.dim());
  ComplexMatrix c = ComplexMatrix::Identity(n, n);
  for (std::size_t k = 0; k < history.size(); ++k) {
    const TimeSlice& s = schema.slices()[k];
    c = s.decomposition.projector(history[k]) * s.evolution * c;
  }
  return c;
}

Complex amplitude(const HistorySchema& schema, const OutcomeTuple& history) {
  if (!schema.is_pure())
    throw Error(ErrorCode::kMixedInitialState, "amplitudes need a pure initial state");
  check_tuple(schema, history);
  const ProjectiveDecomposition& last = schema.slices().back().decomposition;
  if (last.rank(history.back()) != 1)
    throw Error(ErrorCode::kFinalSliceNotRankOne, "final-slice projector " + last.label(history.back()) +
                                                      " is not rank one");
  const Ket f = last.basis_vector(history.back());
  return f.dot(class_operator(schema, history) * *schema.initial_ket());
}

// ---------------------------------------------------------------------------

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  if (!finite) out.emplace_back("finite");
  if (!hermitian) out.emplace_back("hermiticity");
  if (!normalized) out.emplace_back("normalization");
  if (!strongly_positive) out.emplace_back("strong_positivity");
  if (!bilinear) out.emplace_back("bilinearity");
  if (!block_structured) out.emplace_back("block_structure");
  return out;
}

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("h" + std::to_string(i + 1));
  return labels;
}

ValidationReport run_validation(const DecoherenceFunctional& df) {
  ValidationReport r;
  const ComplexMatrix& d = df.entries();
  const std::size_t n = df.size();
  r.finite = all_finite(d);
  if (!r.finite) {
    r.hermitian = r.normalized = r.strongly_positive = r.bilinear = r.block_structured = false;
    r.hermiticity_residual = r.normalization_residual = std::numeric_limits<double>::infinity();
    return r;
  }

  r.hermiticity_residual = hermiticity_residual(d);
  r.hermitian = r.hermiticity_residual <= kDfTolerance;

  r.normalization_residual = std::abs(d.sum() - Complex(1.0, 0.0));
  r.normalized = r.normalization_residual <= kDfTolerance;

  // Strong positivity is judged on the Hermitian part so a Hermiticity
  // failure is reported once, not twice.
  const ComplexMatrix sym = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.strongly_positive = r.min_eigenvalue >= -kDfTolerance;

  // Bilinearity holds by construction; spot-check it on fixed pseudo-random
  // event triples.
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 16; ++trial) {
    Event a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int which = pick(rng);
      if (which == 0) a.insert(i);
      else if (which == 1) b.insert(i);
      if (pick(rng) == 0) c.insert(i);
    }
    const Complex lhs = functional(df, a | b, c);
    const Complex rhs = functional(df, a, c) + functional(df, b, c);
    r.bilinearity_residual = std::max(r.bilinearity_residual, std::abs(lhs - rhs));
  }
  r.bilinear = r.bilinearity_residual <= kDfTolerance;

  if (df.has_sector_info()) {
    r.block_applicable = true;
    const auto& fin = df.final_outcome_of();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (fin[i] != fin[j]) r.block_residual = std::max(r.block_residual, std::abs(df.entry(i, j)));
    r.block_structured = r.block_residual <= kDfTolerance;
  }
  return r;
}

}  // namespace

DecoherenceFunctional::DecoherenceFunctional(ComplexMatrix entries, std::vector<std::string> labels,
                                             std::vector<std::size_t> final_outcome_of,
                                             std::vector<std::string> final_outcome_labels)
    : entries_(std::move(entries)),
      labels_(std::move(labels)),
      final_outcome_of_(std::move(final_outcome_of)),
      final_outcome_labels_(std::move(final_outcome_labels)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw Error(ErrorCode::kMalformedInput, "decoherence functional must be a non-empty square matrix");
  const std::size_t n = size();
  if (labels_.empty()) labels_ = default_labels(n);
  if (labels_.size() != n)
    throw Error(ErrorCode::kMalformedInput, "decoherence functional label count does not match its size");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != n)
    throw Error(ErrorCode::kMalformedInput, "history labels must be unique");
  if (!final_outcome_of_.empty()) {
    if (final_outcome_of_.size() != n)
      throw Error(ErrorCode::kMalformedInput, "final outcome map does not cover every history");
    for (std::size_t f : final_outcome_of_)
      if (f >= final_outcome_labels_.size())
        throw Error(ErrorCode::kMalformedInput, "final outcome index has no label");
  }
  validation_ = run_validation(*this);
}

DecoherenceFunctional DecoherenceFunctional::from_matrix(ComplexMatrix entries, std::vector<std::string> labels) {
  if (entries.size() > 0 && !all_finite(entries))
    throw Error(ErrorCode::kMalformedInput, "decoherence functional has non-finite entries");
  return DecoherenceFunctional(std::move(entries), std::move(labels), {}, {});
}

DecoherenceFunctional build_df(const HistorySchema& schema, const Limits& limits) {
  const HistorySpace space = enumerate_histories(schema, limits);
  const auto d = static_cast<Eigen::Index>(schema.dim());

  // rho = sum_k w_k |e_k><e_k|; the columns of `root` are sqrt(w_k) e_k, so
  // D(i, j) = sum_k <C_i root_k | C_j root_k>.
  ComplexMatrix root;
  if (schema.is_pure()) {
    root = *schema.initial_ket();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (schema.rho() + schema.rho().adjoint()));
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < d; ++k)
      if (solver.eigenvalues()(k) > 1e-15) kept.push_back(k);
    root = ComplexMatrix(d, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
      root.col(static_cast<Eigen::Index>(c)) =
          std::sqrt(solver.eigenvalues()(kept[c])) * solver.eigenvectors().col(kept[c]);
  }

  // Breadth-first application of the slices keeps prefixes in lexicographic
  // order, so the final level matches the enumeration order.
  std::vector<ComplexMatrix> level{root};
  for (const TimeSlice& s : schema.slices()) {
    std::vector<ComplexMatrix> next;
    next.reserve(level.size() * s.decomposition.size());
    for (const ComplexMatrix& m : level) {
      const ComplexMatrix evolved = s.evolution * m;
      for (const ComplexMatrix& p : s.decomposition.projectors()) next.push_back(p * evolved);
    }
    level = std::move(next);
  }

  const auto n = static_cast<Eigen::Index>(space.size());
  const Eigen::Index stacked = d * root.cols();
  ComplexMatrix w(stacked, n);
  for (Eigen::Index i = 0; i < n; ++i)
    w.col(i) = Eigen::Map<const Eigen::VectorXcd>(level[static_cast<std::size_t>(i)].data(), stacked);
  ComplexMatrix entries = w.adjoint() * w;

  std::vector<std::size_t> finals;
  finals.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) finals.push_back(space.final_outcome(i));
  return DecoherenceFunctional(std::move(entries), space.labels, std::move(finals),
                               schema.slices().back().decomposition.labels());
}

Complex functional(const DecoherenceFunctional& df, const Event& a, const Event& b) {
  if (a.universe() != df.size() || b.universe() != df.size())
    throw Error(ErrorCode::kIndexOutOfRange, "event does not belong to this history space");
  Complex total{0.0, 0.0};
  const auto bm = b.members();
  for (std::size_t i : a.members())
    for (std::size_t j : bm) total += df.entry(i, j);
  return total;
}

double measure(const DecoherenceFunctional& df, const Event& event) {
  if (event.universe() != df.size())
    throw Error(ErrorCode::kIndexOutOfRange, "event does not belong to this history space");
  if (event.empty()) return 0.0;
  const Complex value = functional(df, event, event);
  if (std::abs(value.imag()) > kDfTolerance)
    throw Error(ErrorCode::kImaginaryResidue,
                "measure has imaginary part " + std::to_string(value.imag()) + " for " +
                    format_event(event, df.labels()));
  return value.real();
}

ValidationReport validate_df(const DecoherenceFunctional& df) { return df.validation(); }

bool has_block_structure(const DecoherenceFunctional& df) {
  return df.has_sector_info() && df.validation().block_applicable && df.validation().block_structured;
}

std::vector<Event> final_sectors(const DecoherenceFunctional& df) {
  const std::size_t n = df.size();
  if (!has_block_structure(df)) return {Event::full(n)};
  std::vector<Event> sectors(df.final_outcome_labels().size(), Event(n));
  for (std::size_t i = 0; i < n; ++i) sectors[df.final_outcome_of()[i]].insert(i);
  std::erase_if(sectors, [](const Event& e) { return e.empty(); });
  return sectors;
}

}  // namespace coevent
