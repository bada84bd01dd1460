#pragma once

#include <cstddef>

namespace coevent {

// Structural checks: unitarity, projector algebra, normalized kets.
inline constexpr double kUnitTolerance = 1e-9;
// Decoherence functional axiom residuals and off-diagonal decoherence.
inline constexpr double kDfTolerance = 1e-9;
// Measure-zero classification. Values in (kZeroTolerance, kBorderlineUpper]
// are reported as borderline instead of being silently classified.
inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kBorderlineUpper = 1e-7;

struct Limits {
  /// Largest history space |Omega| that may be enumerated.
  std::size_t max_histories = std::size_t{1} << 20;
  /// Largest block (sector, or the whole space without block structure)
  /// whose 2^n subsets are scanned exhaustively.
  std::size_t max_subset_block = 20;
  /// Largest global zero-event family materialized on request.
  std::size_t max_materialized = std::size_t{1} << 16;

  /// Defaults, with COEVENT_MAX_OMEGA overriding max_histories when set.
  static Limits from_environment();
};

}  // namespace coevent
