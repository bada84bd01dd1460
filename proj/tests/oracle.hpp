#pragma once

// Brute-force reference computations. Nothing here calls into the library's
// enumeration code: measures are direct double sums over the matrix and
// supports come from plain subset scans.

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Mask = std::uint64_t;

constexpr double kZero = 1e-9;

inline double measure(const Matrix& d, Mask s) {
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (!((s >> i) & 1U)) continue;
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if ((s >> j) & 1U) total += d(i, j);
  }
  return total.real();
}

inline Complex functional(const Matrix& d, Mask a, Mask b) {
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (((a >> i) & 1U) && ((b >> j) & 1U)) total += d(i, j);
  return total;
}

inline std::vector<double> all_measures(const Matrix& d) {
  const Mask count = Mask{1} << d.rows();
  std::vector<double> mu(count);
  for (Mask s = 0; s < count; ++s) mu[s] = measure(d, s);
  return mu;
}

inline bool mask_less(Mask a, Mask b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  for (int i = 0; i < 64; ++i) {
    const bool ia = (a >> i) & 1U, ib = (b >> i) & 1U;
    if (ia != ib) return ia;
  }
  return false;
}

inline std::vector<Mask> sorted(std::vector<Mask> v) {
  std::sort(v.begin(), v.end(), mask_less);
  return v;
}

/// Nonempty zero events.
inline std::vector<Mask> zero_sets(const std::vector<double>& mu) {
  std::vector<Mask> out;
  for (Mask s = 1; s < mu.size(); ++s)
    if (mu[s] <= kZero) out.push_back(s);
  return sorted(out);
}

inline bool nontrivial(Mask z, const std::vector<double>& mu) {
  for (Mask s = (z - 1) & z; s != 0; s = (s - 1) & z)
    if (mu[s] > kZero) return true;
  return false;
}

inline std::vector<Mask> minimal(const std::vector<Mask>& family) {
  std::vector<Mask> out;
  for (Mask a : family) {
    bool keep = true;
    for (Mask b : family)
      if (b != a && (b & ~a) == 0) keep = false;
    if (keep) out.push_back(a);
  }
  return sorted(out);
}

inline std::vector<Mask> maximal(const std::vector<Mask>& family) {
  std::vector<Mask> out;
  for (Mask a : family) {
    bool keep = true;
    for (Mask b : family)
      if (b != a && (a & ~b) == 0) keep = false;
    if (keep) out.push_back(a);
  }
  return sorted(out);
}

/// Primitive preclusive supports: inclusion-minimal nonempty S contained in
/// no zero event. inside[S] is computed from the full set downwards.
inline std::vector<Mask> primitive_supports(const std::vector<double>& mu) {
  const Mask count = mu.size();
  const int n = std::countr_zero(count);
  std::vector<char> inside(count, 0);
  for (Mask s = count; s-- > 0;) {
    if (mu[s] <= kZero) {
      inside[s] = 1;
      continue;
    }
    for (int b = 0; b < n && !inside[s]; ++b)
      if (!((s >> b) & 1U) && inside[s | (Mask{1} << b)]) inside[s] = 1;
  }
  std::vector<Mask> out;
  for (Mask s = 1; s < count; ++s) {
    if (inside[s]) continue;
    bool is_min = true;
    for (int b = 0; b < n && is_min; ++b)
      if (((s >> b) & 1U) && s != (Mask{1} << b) && !inside[s & ~(Mask{1} << b)]) is_min = false;
    if (is_min) out.push_back(s);
  }
  return sorted(out);
}

/// <b_n| U_n |b_{n-1}> ... <b_1| U_1 |psi> for a chain of rank-1 outcomes.
inline Complex chain_amplitude(const Eigen::VectorXcd& psi, const std::vector<Matrix>& evolutions,
                               const std::vector<Eigen::VectorXcd>& outcomes) {
  Complex amp = 1.0;
  Eigen::VectorXcd prev = psi;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    amp *= outcomes[k].dot(evolutions[k] * prev);
    prev = outcomes[k];
  }
  return amp;
}

/// D(i, j) = conj(a_i) a_j when histories i and j end in the same outcome.
inline Matrix df_from_amplitudes(const std::vector<Complex>& amps, const std::vector<std::size_t>& final_of) {
  const auto n = static_cast<Eigen::Index>(amps.size());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (final_of[static_cast<std::size_t>(i)] == final_of[static_cast<std::size_t>(j)])
        d(i, j) = std::conj(amps[static_cast<std::size_t>(i)]) * amps[static_cast<std::size_t>(j)];
  return d;
}

inline std::vector<std::string> labels_of(Mask m, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if ((m >> i) & 1U) out.push_back(labels[i]);
  return out;
}

}  // namespace oracle
