#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace coevent {

/// A subset of a finite history space {0, ..., universe-1}, stored as a bitmask.
class Event {
 public:
  Event() = default;
  explicit Event(std::size_t universe);

  static Event from_indices(std::size_t universe, std::span<const std::size_t> members);
  static Event from_indices(std::size_t universe, std::initializer_list<std::size_t> members);
  static Event full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(std::size_t i) const;
  void insert(std::size_t i);
  void erase(std::size_t i);

  std::size_t count() const noexcept;
  bool empty() const noexcept;
  std::vector<std::size_t> members() const;

  bool is_subset_of(const Event& other) const;
  bool intersects(const Event& other) const;

  Event complement() const;
  Event operator|(const Event& other) const;
  Event operator&(const Event& other) const;
  Event operator-(const Event& other) const;

  bool operator==(const Event& other) const = default;

 private:
  void check_same_universe(const Event& other) const;

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Deterministic order used everywhere events are listed: by cardinality,
/// then lexicographically by ascending member indices.
bool canonical_less(const Event& a, const Event& b);

/// "{h1,h3}" using the given per-history labels.
std::string format_event(const Event& e, const std::vector<std::string>& labels);
std::vector<std::string> event_labels(const Event& e, const std::vector<std::string>& labels);

/// Parses member labels back into an event. Throws kLabelMismatch on unknown labels.
Event event_from_labels(const std::vector<std::string>& members, const std::vector<std::string>& labels);

}  // namespace coevent
