#include <doctest.h>

#include <cmath>
#include <random>

#include "coevent/error.hpp"
#include "coevent/histories.hpp"
#include "coevent/scenarios.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace coevent;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kMalformedInput;
}

HistorySchema pbr_v2_schema(const Ket& psi) {
  return HistorySchema::pure(psi, {TimeSlice::unevolved(computational_basis(2)), TimeSlice::unevolved(build_xi_basis())});
}

}  // namespace

TEST_CASE("events") {
  Event a = Event::from_indices(70, {0, 3, 69});
  CHECK(a.count() == 3);
  CHECK(a.contains(69));
  CHECK_FALSE(a.contains(1));
  a.erase(3);
  CHECK(a.members() == std::vector<std::size_t>{0, 69});
  const Event b = Event::from_indices(70, {0, 5});
  CHECK((a & b) == Event::from_indices(70, {0}));
  CHECK((a | b).count() == 3);
  CHECK((a - b) == Event::from_indices(70, {69}));
  CHECK(a.complement().count() == 68);
  CHECK(Event::from_indices(70, {0}).is_subset_of(a));
  CHECK(a.intersects(b));
  CHECK(Event(70).empty());
  CHECK(Event::full(70).count() == 70);
  CHECK(code_of([&] { a.insert(70); }) == ErrorCode::kIndexOutOfRange);
  CHECK(code_of([&] { (void)(a | Event(4)); }) == ErrorCode::kLabelMismatch);
}

TEST_CASE("canonical event order and labels") {
  const std::vector<std::string> labels{"h1", "h2", "h3", "h4"};
  const Event e13 = Event::from_indices(4, {0, 2});
  const Event e2 = Event::from_indices(4, {1});
  const Event e14 = Event::from_indices(4, {0, 3});
  const Event e23 = Event::from_indices(4, {1, 2});
  CHECK(canonical_less(e2, e13));
  CHECK(canonical_less(e13, e14));
  CHECK(canonical_less(e14, e23));
  CHECK_FALSE(canonical_less(e13, e13));
  CHECK(format_event(e13, labels) == "{h1,h3}");
  CHECK(event_from_labels({"h3", "h1"}, labels) == e13);
  CHECK(code_of([&] { event_from_labels({"h9"}, labels); }) == ErrorCode::kLabelMismatch);
}

TEST_CASE("history enumeration order and default labels") {
  const HistorySchema s = pbr_v2_schema(tensor(computational_ket(2, 0), ket_plus()));
  CHECK(s.history_count() == 16);
  const HistorySpace space = enumerate_histories(s);
  REQUIRE(space.size() == 16);
  CHECK(space.labels.front() == "h_00xi1");
  CHECK(space.labels[1] == "h_00xi2");
  CHECK(space.labels[4] == "h_01xi1");
  CHECK(space.labels.back() == "h_11xi4");
  CHECK(space.histories[6] == OutcomeTuple{1, 2});
  CHECK(space.final_outcome(6) == 2);

  Limits small;
  small.max_histories = 8;
  CHECK(code_of([&] { enumerate_histories(s, small); }) == ErrorCode::kSpaceTooLarge);
}

TEST_CASE("schema validation errors") {
  const TimeSlice qubit = TimeSlice::unevolved(computational_basis(1));
  CHECK(code_of([&] { HistorySchema::pure(2.0 * ket_plus(), {qubit}); }) == ErrorCode::kValidationFailed);
  CHECK(code_of([&] { HistorySchema::pure(computational_ket(4, 0), {qubit}); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] { HistorySchema::pure(ket_plus(), {}); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] {
          HistorySchema::pure(ket_plus(), {TimeSlice{2.0 * ComplexMatrix::Identity(2, 2), computational_basis(1)}});
        }) == ErrorCode::kNotUnitary);
  CHECK(code_of([&] { HistorySchema::pure(ket_plus(), {qubit}, {"only-one"}); }) == ErrorCode::kMalformedInput);
  ComplexMatrix rho = ComplexMatrix::Identity(2, 2);
  CHECK(code_of([&] { HistorySchema::mixed(rho, {qubit}); }) == ErrorCode::kValidationFailed);
  rho << 1.5, 0, 0, -0.5;
  CHECK(code_of([&] { HistorySchema::mixed(rho, {qubit}); }) == ErrorCode::kValidationFailed);
  rho << 0.5, 1, 0, 0.5;
  CHECK(code_of([&] { HistorySchema::mixed(rho, {qubit}); }) == ErrorCode::kValidationFailed);
}

TEST_CASE("class operators and amplitudes") {
  const Ket psi = tensor(ket_plus(), ket_plus());
  const HistorySchema s = pbr_v2_schema(psi);
  const HistorySpace space = enumerate_histories(s);
  const auto comp = computational_basis(2);
  const auto xi = build_xi_basis();
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  for (std::size_t h = 0; h < space.size(); ++h) {
    const auto& t = space.histories[h];
    const ComplexMatrix c = class_operator(s, t);
    CHECK((c - xi.projector(t[1]) * comp.projector(t[0])).norm() < 1e-12);
    const Complex expected =
        oracle::chain_amplitude(psi, {id, id}, {comp.basis_vector(t[0]), xi.basis_vector(t[1])});
    CHECK(std::abs(amplitude(s, t) - expected) < 1e-12);
  }
  CHECK(code_of([&] { class_operator(s, {0}); }) == ErrorCode::kIndexOutOfRange);
  CHECK(code_of([&] { class_operator(s, {4, 0}); }) == ErrorCode::kIndexOutOfRange);

  const HistorySchema mixed = HistorySchema::mixed(0.5 * ComplexMatrix::Identity(2, 2),
                                                   {TimeSlice::unevolved(computational_basis(1))});
  CHECK(code_of([&] { amplitude(mixed, {0}); }) == ErrorCode::kMixedInitialState);
  const HistorySchema coarse =
      HistorySchema::pure(ket_plus(), {TimeSlice::unevolved(ProjectiveDecomposition({ComplexMatrix::Identity(2, 2)}, {"1"}))});
  CHECK(code_of([&] { amplitude(coarse, {0}); }) == ErrorCode::kFinalSliceNotRankOne);
}

TEST_CASE("decoherence functional agrees with the amplitude oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Ket psi = testing_support::random_ket(2, rng);
    const ComplexMatrix u1 = testing_support::random_unitary(2, rng), u2 = testing_support::random_unitary(2, rng);
    const auto b1 = computational_basis(1);
    const auto b2 = ProjectiveDecomposition::from_basis({ket_plus(), ket_minus()}, {"+", "-"});
    const HistorySchema s = HistorySchema::pure(psi, {TimeSlice{u1, b1}, TimeSlice{u2, b2}, TimeSlice{u1, b1}});
    const HistorySpace space = enumerate_histories(s);
    const DecoherenceFunctional df = build_df(s);
    std::vector<oracle::Complex> amps;
    std::vector<std::size_t> finals;
    for (const auto& t : space.histories) {
      amps.push_back(oracle::chain_amplitude(
          psi, {u1, u2, u1}, {b1.basis_vector(t[0]), b2.basis_vector(t[1]), b1.basis_vector(t[2])}));
      finals.push_back(t.back());
    }
    CHECK((df.entries() - oracle::df_from_amplitudes(amps, finals)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(df.validation().ok());
    CHECK(has_block_structure(df));
    CHECK(final_sectors(df).size() == 2);
  }
}

TEST_CASE("mixed states give the weighted functional") {
  const auto basis = TimeSlice::unevolved(ProjectiveDecomposition::from_basis({ket_plus(), ket_minus()}, {"+", "-"}));
  const auto first = TimeSlice::unevolved(computational_basis(1));
  ComplexMatrix rho(2, 2);
  rho << 0.7, 0.1, 0.1, 0.3;
  const DecoherenceFunctional mixed = build_df(HistorySchema::mixed(rho, {first, basis}));
  // Tr(C_A† C_B ρ) computed straight from the class operators.
  const HistorySchema s = HistorySchema::mixed(rho, {first, basis});
  const HistorySpace space = enumerate_histories(s);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = 0; j < space.size(); ++j) {
      const Complex direct =
          (class_operator(s, space.histories[i]).adjoint() * class_operator(s, space.histories[j]) * rho).trace();
      CHECK(std::abs(mixed.entry(i, j) - direct) < 1e-12);
    }
  CHECK(mixed.validation().ok());
}

TEST_CASE("raw functionals and their validation") {
  ComplexMatrix d(2, 2);
  d << 0.5, Complex(0, 0.5), Complex(0, -0.5), 0.5;
  const auto df = DecoherenceFunctional::from_matrix(d);
  CHECK(df.labels() == std::vector<std::string>{"h1", "h2"});
  CHECK(df.validation().ok());
  CHECK_FALSE(df.has_sector_info());
  CHECK(final_sectors(df).size() == 1);
  CHECK(measure(df, Event(2)) == 0.0);
  CHECK(measure(df, Event::full(2)) == doctest::Approx(1.0));

  ComplexMatrix bad = d;
  bad(0, 1) = 0.5;
  CHECK_FALSE(DecoherenceFunctional::from_matrix(bad).validation().hermitian);
  ComplexMatrix unnorm = 2.0 * d;
  CHECK_FALSE(DecoherenceFunctional::from_matrix(unnorm).validation().normalized);
  ComplexMatrix negative(2, 2);
  negative << 1.0, 1.0, 1.0, -1.0;
  negative /= 2.0;
  const auto neg = DecoherenceFunctional::from_matrix(negative);
  CHECK_FALSE(neg.validation().strongly_positive);
  CHECK(neg.validation().failures() == std::vector<std::string>{"strong_positivity"});

  CHECK(code_of([&] { DecoherenceFunctional::from_matrix(ComplexMatrix(2, 3)); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] { DecoherenceFunctional::from_matrix(d, {"a", "a"}); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] { DecoherenceFunctional::from_matrix(d, {"a"}); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] { measure(df, Event(3)); }) == ErrorCode::kIndexOutOfRange);

  ComplexMatrix imag = ComplexMatrix::Zero(2, 2);
  imag(0, 0) = Complex(1.0, 0.1);
  const auto idf = DecoherenceFunctional::from_matrix(imag);
  CHECK(code_of([&] { measure(idf, Event::from_indices(2, {0})); }) == ErrorCode::kImaginaryResidue);
}

TEST_CASE("block structure is checked against the final outcomes") {
  ComplexMatrix d = ComplexMatrix::Constant(2, 2, 0.25);
  const DecoherenceFunctional leaky(d, {"a", "b"}, {0, 1}, {"x", "y"});
  CHECK(leaky.validation().block_applicable);
  CHECK_FALSE(leaky.validation().block_structured);
  CHECK_FALSE(has_block_structure(leaky));
  ComplexMatrix diag = ComplexMatrix::Identity(2, 2) * 0.5;
  const DecoherenceFunctional blocks(diag, {"a", "b"}, {0, 1}, {"x", "y"});
  CHECK(has_block_structure(blocks));
}

TEST_CASE("functional is bilinear over events") {
  const auto spec = build_scenario("pbr-v2");
  const DecoherenceFunctional df = build_df(spec.candidates[3].schema);
  const Event a = Event::from_indices(16, {0, 4, 7}), b = Event::from_indices(16, {1, 4, 9, 15});
  CHECK(std::abs(functional(df, a, b) - oracle::functional(df.entries(), testing_support::mask_of(a),
                                                           testing_support::mask_of(b))) < 1e-12);
  CHECK(std::abs(functional(df, a, b) - std::conj(functional(df, b, a))) < 1e-12);
}
