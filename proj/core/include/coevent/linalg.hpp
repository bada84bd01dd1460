#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace coevent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Structural predicates. All comparisons are absolute, entrywise.

bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);
bool is_normalized(const Ket& k, double tol);

/// Largest entrywise deviation |m(i,j) - conj(m(j,i))|.
double hermiticity_residual(const ComplexMatrix& m);

/// Kronecker product, left factor major: (a ⊗ b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
Ket tensor(const Ket& a, const Ket& b);

/// |k><k|
ComplexMatrix outer(const Ket& k);

/// Smallest eigenvalue of a Hermitian matrix. Throws kNonHermitian.
double min_eigenvalue_hermitian(const ComplexMatrix& m);

/// exp(-i H t) by Hermitian eigendecomposition. Throws kNonHermitian.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t);

// ---------------------------------------------------------------------------

/// Complete set of mutually orthogonal projectors with one label per outcome.
/// The constructor re-verifies the projector algebra and throws
/// kIncompleteDecomposition when it does not hold within kUnitTolerance.
class ProjectiveDecomposition {
 public:
  ProjectiveDecomposition(std::vector<ComplexMatrix> projectors, std::vector<std::string> labels);

  /// Rank-1 decomposition onto an orthonormal basis.
  static ProjectiveDecomposition from_basis(const std::vector<Ket>& basis,
                                            std::vector<std::string> labels);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const ComplexMatrix& projector(std::size_t i) const { return projectors_.at(i); }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Rank of projector i (its trace, rounded).
  std::size_t rank(std::size_t i) const;
  bool all_rank_one() const;
  /// Unit vector spanning projector i (rank-1 only). Decompositions built
  /// from a basis return the original vector, phase included; otherwise the
  /// phase is fixed so the largest component is real and positive.
  Ket basis_vector(std::size_t i) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> projectors_;
  std::vector<std::string> labels_;
  std::vector<Ket> basis_;
};

// ---------------------------------------------------------------------------
// Named states and bases.

Ket computational_ket(std::size_t dim, std::size_t index);
Ket ket_plus();
Ket ket_minus();

/// Product computational basis of `qubits` qubits, labels "00", "01", ...
ProjectiveDecomposition computational_basis(std::size_t qubits);

/// The entangled two-qubit measurement basis
///   xi1 = (|01> + |10>)/√2,  xi2 = (|0-> + |1+>)/√2,
///   xi3 = (|+1> + |-0>)/√2,  xi4 = (|+-> + |-+>)/√2,
/// labels "xi1".."xi4".
ProjectiveDecomposition build_xi_basis();

struct ThetaBases {
  /// {Psi0, Psi1}: Psi0 = cos θ|0> + sin θ|1>, Psi1 = -sin θ|0> + cos θ|1>.
  ProjectiveDecomposition rotated;
  /// {Psi+, Psi-}: Psi± = cos(θ ± π/4)|0> + sin(θ ± π/4)|1>.
  ProjectiveDecomposition diagonal;
};

ThetaBases build_theta_bases(double theta);

struct QubitReduction {
  double theta = 0.0;
  /// dim × 2 matrix with orthonormal columns |0'> = phi1 and |1'>.
  ComplexMatrix embedding;
  /// Global phase e^{iφ} with phi2 = e^{iφ}(cos θ|0'> + sin θ|1'>).
  Complex phase{1.0, 0.0};
  /// Set when |<phi1|phi2>| = 1; the second column is then an arbitrary completion.
  bool degenerate = false;
};

/// Reduce a pair of state-vectors to the qubit they span. Throws
/// kMalformedInput for unnormalized or mismatched kets.
QubitReduction reduce_to_qubit(const Ket& phi1, const Ket& phi2);

}  // namespace coevent
