#pragma once

#include <vector>

#include "coevent/event.hpp"
#include "coevent/histories.hpp"
#include "coevent/measure_analysis.hpp"

namespace coevent {

/// D_AB((i,k),(j,l)) = D_A(i,j) D_B(k,l), first system major. Labels join as
/// "h1" ⊗ "h2" -> "h12" when both start with 'h', "a|b" otherwise. The
/// product is re-validated; throws kValidationFailed if either factor or the
/// product fails its axioms.
DecoherenceFunctional tensor_df(const DecoherenceFunctional& a, const DecoherenceFunctional& b);

/// Rectangle S_A × S_B as an event of the product space.
Event product_event(const Event& a, const Event& b);

struct WeakViolation {
  PartitionReport subsystem_a;
  PartitionReport subsystem_b;
  /// Weak check of the product partition {A_i × B_j}; fails by construction.
  PartitionReport product;
};

struct CompositionReport {
  DecoherenceFunctional product;
  /// Product zero events not expressible as a union of rectangles
  /// Z_A × Omega_B, Omega_A × Z_B or Z_A × Z_B built from subsystem zero events.
  std::vector<Event> emergent_zero;
  /// Inclusion-minimal members of emergent_zero.
  std::vector<Event> minimal_emergent_zero;
  std::vector<WeakViolation> weak_violations;
};

/// Both subsystem spaces must allow partition search (|Omega| <= 16) and the
/// product catalog must be materializable; kSpaceTooLarge otherwise.
CompositionReport composition_anomalies(const DecoherenceFunctional& a, const DecoherenceFunctional& b,
                                        const Limits& limits = {});

/// True when every member of z lies in an allowed rectangle inside z.
bool covered_by_subsystem_zeros(const Event& z, std::size_t size_a, std::size_t size_b,
                                const std::vector<Event>& zeros_a, const std::vector<Event>& zeros_b);

}  // namespace coevent
