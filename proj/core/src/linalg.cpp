#include "coevent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coevent/error.hpp"
#include "coevent/tolerance.hpp"

namespace coevent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kNonHermitian: return "NonHermitian";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kIncompleteDecomposition: return "IncompleteDecomposition";
    case ErrorCode::kDegenerateSpan: return "DegenerateSpan";
    case ErrorCode::kSpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kMixedInitialState: return "MixedInitialState";
    case ErrorCode::kFinalSliceNotRankOne: return "FinalSliceNotRankOne";
    case ErrorCode::kImaginaryResidue: return "ImaginaryResidue";
    case ErrorCode::kNotAZeroSet: return "NotAZeroSet";
    case ErrorCode::kInvalidPartition: return "InvalidPartition";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kUnknownScenario: return "UnknownScenario";
    case ErrorCode::kMissingParameter: return "MissingParameter";
  }
  return "Unknown";
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && all_finite(m) && hermiticity_residual(m) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol &&
         (m * m.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_normalized(const Ket& k, double tol) {
  return k.size() > 0 && std::abs(k.norm() - 1.0) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix outer(const Ket& k) { return k * k.adjoint(); }

double min_eigenvalue_hermitian(const ComplexMatrix& m) {
  if (!is_hermitian(m, kUnitTolerance))
    throw Error(ErrorCode::kNonHermitian, "min_eigenvalue_hermitian: matrix is not Hermitian");
  if (m.rows() == 0) return 0.0;
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t) {
  if (!is_hermitian(h, kUnitTolerance))
    throw Error(ErrorCode::kNonHermitian, "unitary_from_hamiltonian: Hamiltonian is not Hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const Eigen::VectorXd& energies = solver.eigenvalues();
  Eigen::VectorXcd phases(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -energies(i) * t));
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

// ---------------------------------------------------------------------------

ProjectiveDecomposition::ProjectiveDecomposition(std::vector<ComplexMatrix> projectors,
                                                 std::vector<std::string> labels)
    : dim_(0), projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty())
    throw Error(ErrorCode::kIncompleteDecomposition, "decomposition has no projectors");
  if (labels_.size() != projectors_.size())
    throw Error(ErrorCode::kMalformedInput, "decomposition label count does not match projector count");
  dim_ = static_cast<std::size_t>(projectors_.front().rows());
  const auto n = static_cast<Eigen::Index>(dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const ComplexMatrix& p = projectors_[i];
    if (p.rows() != n || p.cols() != n)
      throw Error(ErrorCode::kMalformedInput, "projectors have inconsistent dimensions");
    if (!is_hermitian(p, kUnitTolerance))
      throw Error(ErrorCode::kIncompleteDecomposition, "projector " + labels_[i] + " is not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > kUnitTolerance)
      throw Error(ErrorCode::kIncompleteDecomposition, "projector " + labels_[i] + " is not idempotent");
    for (std::size_t j = 0; j < i; ++j) {
      if ((p * projectors_[j]).cwiseAbs().maxCoeff() > kUnitTolerance)
        throw Error(ErrorCode::kIncompleteDecomposition,
                    "projectors " + labels_[j] + " and " + labels_[i] + " are not orthogonal");
    }
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kUnitTolerance)
    throw Error(ErrorCode::kIncompleteDecomposition, "projectors do not sum to the identity");
}

ProjectiveDecomposition ProjectiveDecomposition::from_basis(const std::vector<Ket>& basis,
                                                            std::vector<std::string> labels) {
  std::vector<ComplexMatrix> projectors;
  projectors.reserve(basis.size());
  for (const Ket& k : basis) {
    if (!is_normalized(k, kUnitTolerance))
      throw Error(ErrorCode::kIncompleteDecomposition, "basis vector is not normalized");
    projectors.push_back(outer(k));
  }
  ProjectiveDecomposition out(std::move(projectors), std::move(labels));
  out.basis_ = basis;
  return out;
}

std::size_t ProjectiveDecomposition::rank(std::size_t i) const {
  return static_cast<std::size_t>(std::llround(projector(i).trace().real()));
}

bool ProjectiveDecomposition::all_rank_one() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (rank(i) != 1) return false;
  return true;
}

Ket ProjectiveDecomposition::basis_vector(std::size_t i) const {
  if (!basis_.empty()) return basis_.at(i);
  const ComplexMatrix& p = projector(i);
  // The column with the largest diagonal entry is a nonzero multiple of the
  // spanning vector; fix its phase so that entry is real and positive.
  Eigen::Index col = 0;
  p.diagonal().real().maxCoeff(&col);
  Ket v = p.col(col);
  return v / v.norm();
}

// ---------------------------------------------------------------------------

Ket computational_ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::kIndexOutOfRange, "computational_ket index out of range");
  Ket k = Ket::Zero(static_cast<Eigen::Index>(dim));
  k(static_cast<Eigen::Index>(index)) = 1.0;
  return k;
}

Ket ket_plus() {
  Ket k(2);
  k << std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2;
  return k;
}

Ket ket_minus() {
  Ket k(2);
  k << std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2;
  return k;
}

ProjectiveDecomposition computational_basis(std::size_t qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<Ket> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) {
    basis.push_back(computational_ket(dim, i));
    std::string label(qubits, '0');
    for (std::size_t q = 0; q < qubits; ++q)
      if ((i >> (qubits - 1 - q)) & 1U) label[q] = '1';
    labels.push_back(std::move(label));
  }
  return ProjectiveDecomposition::from_basis(basis, std::move(labels));
}

ProjectiveDecomposition build_xi_basis() {
  const Ket zero = computational_ket(2, 0);
  const Ket one = computational_ket(2, 1);
  const Ket plus = ket_plus();
  const Ket minus = ket_minus();
  const double r = std::numbers::sqrt2 / 2;
  std::vector<Ket> basis{
      r * (tensor(zero, one) + tensor(one, zero)),
      r * (tensor(zero, minus) + tensor(one, plus)),
      r * (tensor(plus, one) + tensor(minus, zero)),
      r * (tensor(plus, minus) + tensor(minus, plus)),
  };
  return ProjectiveDecomposition::from_basis(basis, {"xi1", "xi2", "xi3", "xi4"});
}

namespace {

Ket real_qubit(double angle) {
  Ket k(2);
  k << std::cos(angle), std::sin(angle);
  return k;
}

}  // namespace

ThetaBases build_theta_bases(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorCode::kMalformedInput, "theta must be finite");
  constexpr double kQuarter = std::numbers::pi / 4;
  Ket psi1(2);
  psi1 << -std::sin(theta), std::cos(theta);
  return ThetaBases{
      ProjectiveDecomposition::from_basis({real_qubit(theta), psi1}, {"Psi0", "Psi1"}),
      ProjectiveDecomposition::from_basis({real_qubit(theta + kQuarter), real_qubit(theta - kQuarter)},
                                          {"Psi+", "Psi-"}),
  };
}

QubitReduction reduce_to_qubit(const Ket& phi1, const Ket& phi2) {
  if (phi1.size() != phi2.size() || phi1.size() < 2)
    throw Error(ErrorCode::kMalformedInput, "reduce_to_qubit: kets must share a dimension of at least 2");
  if (!is_normalized(phi1, kUnitTolerance) || !is_normalized(phi2, kUnitTolerance))
    throw Error(ErrorCode::kMalformedInput, "reduce_to_qubit: kets must be normalized");

  QubitReduction out;
  const Complex overlap = phi1.dot(phi2);  // <phi1|phi2>
  const double magnitude = std::abs(overlap);
  out.phase = magnitude > 0.0 ? overlap / magnitude : Complex(1.0, 0.0);
  const Ket aligned = std::conj(out.phase) * phi2;

  out.embedding = ComplexMatrix(phi1.size(), 2);
  out.embedding.col(0) = phi1;

  if (magnitude >= 1.0 - kUnitTolerance) {
    out.degenerate = true;
    out.theta = 0.0;
    // Complete with the computational vector least aligned with phi1.
    Eigen::Index pick = 0;
    phi1.cwiseAbs().minCoeff(&pick);
    Ket e = computational_ket(static_cast<std::size_t>(phi1.size()), static_cast<std::size_t>(pick));
    e -= phi1.dot(e) * phi1;
    out.embedding.col(1) = e / e.norm();
    return out;
  }

  const Ket residual = aligned - magnitude * phi1;
  const double sine = residual.norm();
  out.embedding.col(1) = residual / sine;
  out.theta = std::atan2(sine, magnitude);
  return out;
}

}  // namespace coevent
