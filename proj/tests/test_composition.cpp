#include <doctest.h>

#include <random>

#include "coevent/composition.hpp"
#include "coevent/error.hpp"
#include "coevent/scenarios.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace coevent;
using testing_support::family;

namespace {

const DecoherenceFunctional& d_a() {
  static const DecoherenceFunctional df = build_scenario("composite-product").raw_functionals[0].df;
  return df;
}

const DecoherenceFunctional& d_ab_printed() {
  static const DecoherenceFunctional df = build_scenario("composite-product").raw_functionals[1].df;
  return df;
}

}  // namespace

TEST_CASE("product functional layout and labels") {
  const DecoherenceFunctional p = tensor_df(d_a(), d_a());
  CHECK(p.labels() == std::vector<std::string>{"h11", "h12", "h21", "h22"});
  CHECK((p.entries() - d_ab_printed().entries()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.validation().ok());

  const auto x = DecoherenceFunctional::from_matrix(ComplexMatrix::Identity(2, 2) / 2.0, {"a", "b"});
  CHECK(tensor_df(x, d_a()).labels() == std::vector<std::string>{"a|h1", "a|h2", "b|h1", "b|h2"});
}

TEST_CASE("product functional keeps sector information") {
  const auto spec = build_scenario("appendix-theta", {{"theta", 0.7}});
  const DecoherenceFunctional a = build_df(spec.candidates[0].schema);
  const DecoherenceFunctional b = build_df(spec.candidates[1].schema);
  const DecoherenceFunctional p = tensor_df(a, b);
  CHECK(p.size() == 64);
  CHECK(has_block_structure(p));
  CHECK(final_sectors(p).size() == 4);
}

TEST_CASE("rectangles factorise the measure") {
  std::mt19937_64 rng(21);
  const DecoherenceFunctional a = DecoherenceFunctional::from_matrix(testing_support::random_df_entries(3, 2, rng));
  const DecoherenceFunctional b = DecoherenceFunctional::from_matrix(testing_support::random_df_entries(3, 1, rng));
  const DecoherenceFunctional p = tensor_df(a, b);
  for (std::uint64_t sa = 0; sa < 8; ++sa)
    for (std::uint64_t sb = 0; sb < 8; ++sb) {
      const Event ea = testing_support::event_of(3, sa), eb = testing_support::event_of(3, sb);
      CHECK(measure(p, product_event(ea, eb)) == doctest::Approx(measure(a, ea) * measure(b, eb)).epsilon(1e-12));
    }
}

TEST_CASE("medium decoherence survives composition") {
  const auto diag = DecoherenceFunctional::from_matrix(ComplexMatrix::Identity(2, 2) / 2.0);
  const Event h1 = Event::from_indices(2, {0}), h2 = Event::from_indices(2, {1});
  const DecoherenceFunctional p = tensor_df(diag, diag);
  const std::vector<Event> cells{product_event(h1, h1), product_event(h1, h2), product_event(h2, h1),
                                 product_event(h2, h2)};
  CHECK(is_decoherent_partition(diag, {h1, h2}, DecoherenceMode::kMedium).decoherent);
  CHECK(is_decoherent_partition(p, cells, DecoherenceMode::kMedium).decoherent);
}

TEST_CASE("emergent zero set of the squared subsystem") {
  const CompositionReport r = composition_anomalies(d_a(), d_a());
  const auto& labels = r.product.labels();
  CHECK(family(r.minimal_emergent_zero, labels) == family({{"h11", "h22"}}));
  CHECK(family(r.emergent_zero, labels) == family({{"h11", "h22"}}));
  REQUIRE(r.weak_violations.size() == 1);
  const WeakViolation& w = r.weak_violations[0];
  CHECK(w.subsystem_a.decoherent);
  CHECK(w.subsystem_b.decoherent);
  CHECK_FALSE(w.product.decoherent);
  CHECK(w.product.worst_value.real() == doctest::Approx(-0.25));
  CHECK(w.product.max_offdiag_residual == doctest::Approx(0.25));
}

TEST_CASE("rectangle coverage") {
  const std::vector<Event> za{Event::from_indices(2, {0})};
  const std::vector<Event> none;
  // Z_A x Omega_B
  CHECK(covered_by_subsystem_zeros(Event::from_indices(4, {0, 1}), 2, 2, za, none));
  CHECK_FALSE(covered_by_subsystem_zeros(Event::from_indices(4, {0, 3}), 2, 2, za, none));
  CHECK_FALSE(covered_by_subsystem_zeros(Event::from_indices(4, {0}), 2, 2, none, none));
}

TEST_CASE("invalid factors are rejected") {
  ComplexMatrix bad(2, 2);
  bad << 1.0, 1.0, 1.0, -1.0;
  const auto df = DecoherenceFunctional::from_matrix(bad / 2.0);
  try {
    tensor_df(df, d_a());
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidationFailed);
  }
}
