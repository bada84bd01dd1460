#pragma once

// Property checks over decoherence functionals. Each returns an empty string
// on success and a description of the first failure otherwise.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "coevent/coevents.hpp"
#include "coevent/composition.hpp"
#include "coevent/measure_analysis.hpp"
#include "coevent/scenarios.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

namespace properties {

using namespace coevent;
using testing_support::event_of;
using testing_support::mask_of;

struct NamedDf {
  std::string name;
  DecoherenceFunctional df;
};

inline std::vector<NamedDf> scenario_dfs() {
  std::vector<NamedDf> out;
  auto add_spec = [&](const ScenarioSpec& spec) {
    std::string prefix = spec.name;
    if (auto it = spec.parameters.find("theta"); it != spec.parameters.end())
      prefix += "(" + std::to_string(it->second) + ")";
    for (const auto& c : spec.candidates) out.push_back({prefix + " " + c.label, build_df(c.schema)});
    for (const auto& d : spec.raw_functionals) out.push_back({prefix + " " + d.label, d.df});
  };
  add_spec(build_scenario("pbr-v1"));
  add_spec(build_scenario("pbr-v2"));
  for (double theta : {0.3, 0.7, 1.2, std::atan(1.0 / 3.0)}) {
    add_spec(build_scenario("appendix-theta", {{"theta", theta}}));
    add_spec(build_scenario("appendix-hamiltonian", {{"theta", theta}}));
  }
  add_spec(build_scenario("composite-product"));
  const auto comp = build_scenario("composite-product");
  out.push_back({"composite-product D_A x D_A", tensor_df(comp.raw_functionals[0].df, comp.raw_functionals[0].df)});
  return out;
}

/// Strongly positive synthetic functionals with |Omega| <= 8; every other
/// one carries final-sector information with a block-diagonal matrix.
inline std::vector<NamedDf> synthetic_dfs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, 8), rank(1, 2);
  std::vector<NamedDf> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = size(rng);
    const std::string name = "synthetic#" + std::to_string(k);
    if (k % 2 == 0 || n < 4) {
      out.push_back({name, DecoherenceFunctional::from_matrix(testing_support::random_df_entries(n, rank(rng), rng))});
      continue;
    }
    const std::size_t split = n / 2;
    ComplexMatrix d = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto s1 = static_cast<Eigen::Index>(split), s2 = static_cast<Eigen::Index>(n - split);
    d.topLeftCorner(s1, s1) = testing_support::random_df_entries(split, rank(rng), rng);
    d.bottomRightCorner(s2, s2) = testing_support::random_df_entries(n - split, rank(rng), rng);
    d /= 2.0;
    std::vector<std::size_t> finals(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      finals[i] = i < split ? 0 : 1;
      labels[i] = "h" + std::to_string(i + 1);
    }
    out.push_back({name, DecoherenceFunctional(d, labels, finals, {"f0", "f1"})});
  }
  return out;
}

inline std::string check_axioms(const NamedDf& d) {
  const ValidationReport& v = d.df.validation();
  if (v.ok()) return {};
  std::string failed;
  for (const auto& f : v.failures()) failed += " " + f;
  return d.name + ": axioms fail:" + failed;
}

inline std::string three_path(const NamedDf& d, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const auto& e = d.df.entries();
  const double lhs = oracle::measure(e, a | b | c);
  const double rhs = oracle::measure(e, a | b) + oracle::measure(e, a | c) + oracle::measure(e, b | c) -
                     oracle::measure(e, a) - oracle::measure(e, b) - oracle::measure(e, c);
  if (std::abs(lhs - rhs) > 1e-9) return d.name + ": three-path sum rule fails";
  // the library's measure agrees with the direct sum
  const std::size_t n = d.df.size();
  if (std::abs(measure(d.df, event_of(n, a | b | c)) - lhs) > 1e-9) return d.name + ": measure disagrees with direct sum";
  return {};
}

/// All ordered triples of pairwise disjoint events.
inline std::string check_three_path_exhaustive(const NamedDf& d) {
  const std::size_t n = d.df.size();
  std::size_t colorings = 1;
  for (std::size_t i = 0; i < n; ++i) colorings *= 4;
  for (std::size_t code = 0; code < colorings; ++code) {
    std::uint64_t part[4] = {0, 0, 0, 0};
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i, rest /= 4) part[rest % 4] |= std::uint64_t{1} << i;
    if (auto err = three_path(d, part[1], part[2], part[3]); !err.empty()) return err;
  }
  return {};
}

inline std::string check_three_path_random(const NamedDf& d, std::size_t triples, std::mt19937_64& rng) {
  const std::size_t n = d.df.size();
  std::uniform_int_distribution<int> color(0, 3);
  for (std::size_t t = 0; t < triples; ++t) {
    std::uint64_t part[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) part[color(rng)] |= std::uint64_t{1} << i;
    if (auto err = three_path(d, part[1], part[2], part[3]); !err.empty()) return err;
  }
  return {};
}

/// Every zero event decoheres (medium) with its complement.
inline std::string check_zero_complement(const NamedDf& d) {
  const ZeroSetCatalog cat = find_zero_sets(d.df);
  const std::size_t n = d.df.size();
  std::vector<Event> zeros = cat.zero_events();
  for (const Event& z : cat.maximal_zero_events()) zeros.push_back(z);
  for (const Event& z : zeros) {
    if (std::abs(functional(d.df, z, z.complement())) > 1e-9)
      return d.name + ": zero event " + format_event(z, d.df.labels()) + " interferes with its complement";
    if (z.count() < n && !is_decoherent_partition(d.df, {z, z.complement()}, DecoherenceMode::kMedium).decoherent)
      return d.name + ": partition {Z, not Z} is not medium decoherent";
  }
  return {};
}

inline std::string check_sector_additivity(const NamedDf& d, std::mt19937_64& rng) {
  if (!has_block_structure(d.df)) return {};
  const std::size_t n = d.df.size();
  const auto sectors = final_sectors(d.df);
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
  for (int t = 0; t < 100; ++t) {
    const Event e = event_of(n, pick(rng));
    double sum = 0.0;
    for (const Event& s : sectors) sum += measure(d.df, e & s);
    if (std::abs(sum - measure(d.df, e)) > 1e-9) return d.name + ": sector additivity fails";
  }
  return {};
}

/// Co-events are multiplicative, preclusive, primitive and confined to one sector.
inline std::string check_coevents(const NamedDf& d, std::mt19937_64& rng, std::size_t pairs = 300) {
  const std::size_t n = d.df.size();
  const ZeroSetCatalog cat = find_zero_sets(d.df);
  const CoEventSet set = enumerate_primitive_coevents(d.df, cat);
  const auto sectors = final_sectors(d.df);
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
  const std::vector<Event> zeros = cat.zero_events();
  for (const CoEvent& c : set.coevents) {
    for (std::size_t t = 0; t < pairs; ++t) {
      const Event a = event_of(n, pick(rng)), b = event_of(n, pick(rng));
      if (evaluate(c, a & b) != (evaluate(c, a) && evaluate(c, b))) return d.name + ": co-event not multiplicative";
    }
    if (!evaluate(c, Event::full(n)) || evaluate(c, Event(n))) return d.name + ": co-event not unital";
    for (const Event& z : zeros)
      if (evaluate(c, z)) return d.name + ": co-event " + format_event(c.support, d.df.labels()) + " not preclusive";
    for (std::size_t h : c.support.members()) {
      Event smaller = c.support;
      smaller.erase(h);
      if (!smaller.empty() && is_preclusive(smaller, cat)) return d.name + ": co-event support not minimal";
    }
    const bool one_sector = std::any_of(sectors.begin(), sectors.end(), [&](const Event& s) { return c.support.is_subset_of(s); });
    if (!one_sector) return d.name + ": co-event support spans sectors";
  }
  return {};
}

/// Catalog and co-events against the brute-force oracle.
inline std::string check_oracle(const NamedDf& d) {
  const auto mu = oracle::all_measures(d.df.entries());
  const ZeroSetCatalog cat = find_zero_sets(d.df);
  const auto zeros = oracle::zero_sets(mu);
  if (testing_support::masks_of(cat.zero_events()) != zeros) return d.name + ": zero events differ from oracle";
  if (testing_support::masks_of(cat.maximal_zero_events()) != oracle::maximal(zeros))
    return d.name + ": maximal zero events differ from oracle";
  if (testing_support::masks_of(cat.minimal_zero_events()) != oracle::minimal(zeros))
    return d.name + ": minimal zero events differ from oracle";
  std::vector<oracle::Mask> nontrivial;
  for (oracle::Mask z : zeros)
    if (oracle::nontrivial(z, mu)) nontrivial.push_back(z);
  if (testing_support::masks_of(cat.nontrivial_zero_events()) != nontrivial)
    return d.name + ": non-trivial zero events differ from oracle";
  if (testing_support::masks_of(enumerate_primitive_coevents(d.df, cat)) != oracle::primitive_supports(mu))
    return d.name + ": co-events differ from oracle";
  return {};
}

/// Every subset of a trivial zero event is itself a zero event.
inline std::string check_trivial_monotone(const NamedDf& d) {
  const ZeroSetCatalog cat = find_zero_sets(d.df);
  for (const Event& z : cat.zero_events()) {
    if (cat.is_nontrivial(z)) continue;
    const std::uint64_t m = mask_of(z);
    for (std::uint64_t s = m; s != 0; s = (s - 1) & m)
      if (!cat.is_zero(event_of(d.df.size(), s))) return d.name + ": subset of a trivial zero event is not zero";
  }
  return {};
}

/// Every medium-decoherent partition is weakly decoherent.
inline std::string check_weak_contains_medium(const NamedDf& d) {
  const std::size_t n = d.df.size();
  if (n > 8) return {};
  const auto medium = find_decoherent_partitions(d.df, DecoherenceMode::kMedium, n);
  for (const auto& p : medium)
    if (!is_decoherent_partition(d.df, p.cells, DecoherenceMode::kWeak).decoherent)
      return d.name + ": medium partition fails the weak condition";
  const auto weak = find_decoherent_partitions(d.df, DecoherenceMode::kWeak, n);
  if (weak.size() < medium.size()) return d.name + ": fewer weak than medium partitions";
  return {};
}

/// Without non-trivial zero events every primitive co-event is classical.
inline std::string check_classical_collapse(const NamedDf& d) {
  const ZeroSetCatalog cat = find_zero_sets(d.df);
  if (!cat.nontrivial_zero_events().empty()) return {};
  const CoEventSet set = enumerate_primitive_coevents(d.df, cat);
  for (const CoEvent& c : set.coevents)
    if (!c.classical()) return d.name + ": non-classical co-event without non-trivial zero events";
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < d.df.size(); ++i) nonzero += measure(d.df, Event::from_indices(d.df.size(), {i})) > 1e-9;
  if (set.size() != nonzero) return d.name + ": classical co-events do not match non-zero histories";
  return {};
}

}  // namespace properties
