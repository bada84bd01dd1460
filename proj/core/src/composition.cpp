#include "coevent/composition.hpp"

#include <algorithm>

#include "coevent/error.hpp"

namespace coevent {

namespace {

std::string join_labels(const std::string& a, const std::string& b) {
  if (!a.empty() && !b.empty() && a.front() == 'h' && b.front() == 'h') return a + b.substr(1);
  return a + "|" + b;
}

void require_valid(const DecoherenceFunctional& df, const char* which) {
  if (!df.validation().ok())
    throw Error(ErrorCode::kValidationFailed, std::string(which) + " decoherence functional fails validation");
}

}  // namespace

DecoherenceFunctional tensor_df(const DecoherenceFunctional& a, const DecoherenceFunctional& b) {
  require_valid(a, "first");
  require_valid(b, "second");
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (const std::string& la : a.labels())
    for (const std::string& lb : b.labels()) labels.push_back(join_labels(la, lb));

  std::vector<std::size_t> finals;
  std::vector<std::string> final_labels;
  if (a.has_sector_info() && b.has_sector_info()) {
    const std::size_t nb = b.final_outcome_labels().size();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < b.size(); ++k)
        finals.push_back(a.final_outcome_of()[i] * nb + b.final_outcome_of()[k]);
    for (const std::string& fa : a.final_outcome_labels())
      for (const std::string& fb : b.final_outcome_labels()) final_labels.push_back(fa + "|" + fb);
  }
  DecoherenceFunctional product(tensor(a.entries(), b.entries()), std::move(labels), std::move(finals),
                                std::move(final_labels));
  require_valid(product, "product");
  return product;
}

Event product_event(const Event& a, const Event& b) {
  Event out(a.universe() * b.universe());
  const auto bm = b.members();
  for (std::size_t i : a.members())
    for (std::size_t k : bm) out.insert(i * b.universe() + k);
  return out;
}

bool covered_by_subsystem_zeros(const Event& z, std::size_t size_a, std::size_t size_b,
                                const std::vector<Event>& zeros_a, const std::vector<Event>& zeros_b) {
  const Event all_a = Event::full(size_a);
  const Event all_b = Event::full(size_b);
  std::vector<Event> rectangles;
  for (const Event& za : zeros_a) rectangles.push_back(product_event(za, all_b));
  for (const Event& zb : zeros_b) rectangles.push_back(product_event(all_a, zb));
  for (const Event& za : zeros_a)
    for (const Event& zb : zeros_b) rectangles.push_back(product_event(za, zb));
  std::erase_if(rectangles, [&](const Event& r) { return r.empty() || !r.is_subset_of(z); });

  Event covered(z.universe());
  for (const Event& r : rectangles) covered = covered | r;
  return covered == z;
}

CompositionReport composition_anomalies(const DecoherenceFunctional& a, const DecoherenceFunctional& b,
                                        const Limits& limits) {
  CompositionReport report{tensor_df(a, b), {}, {}, {}};

  const std::vector<Event> zeros_a = find_zero_sets(a, limits).zero_events();
  const std::vector<Event> zeros_b = find_zero_sets(b, limits).zero_events();
  const ZeroSetCatalog product_catalog = find_zero_sets(report.product, limits);
  for (const Event& z : product_catalog.zero_events())
    if (!covered_by_subsystem_zeros(z, a.size(), b.size(), zeros_a, zeros_b)) report.emergent_zero.push_back(z);
  for (const Event& z : report.emergent_zero) {
    const bool has_smaller = std::any_of(report.minimal_emergent_zero.begin(), report.minimal_emergent_zero.end(),
                                         [&](const Event& m) { return m.is_subset_of(z); });
    if (!has_smaller) report.minimal_emergent_zero.push_back(z);
  }

  const auto weak_a = find_decoherent_partitions(a, DecoherenceMode::kWeak, a.size());
  const auto weak_b = find_decoherent_partitions(b, DecoherenceMode::kWeak, b.size());
  for (const PartitionReport& pa : weak_a)
    for (const PartitionReport& pb : weak_b) {
      std::vector<Event> cells;
      for (const Event& ca : pa.cells)
        for (const Event& cb : pb.cells) cells.push_back(product_event(ca, cb));
      PartitionReport joint = is_decoherent_partition(report.product, cells, DecoherenceMode::kWeak);
      if (!joint.decoherent) report.weak_violations.push_back(WeakViolation{pa, pb, std::move(joint)});
    }
  return report;
}

}  // namespace coevent
