#include "coevent/event.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

#include "coevent/error.hpp"
#include "coevent/tolerance.hpp"

namespace coevent {

Limits Limits::from_environment() {
  Limits limits;
  if (const char* raw = std::getenv("COEVENT_MAX_OMEGA"); raw != nullptr && *raw != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == nullptr || *end != '\0' || value == 0)
      throw Error(ErrorCode::kMalformedInput, "COEVENT_MAX_OMEGA must be a positive integer");
    limits.max_histories = static_cast<std::size_t>(value);
  }
  return limits;
}

namespace {
constexpr std::size_t kBits = 64;
}

Event::Event(std::size_t universe) : universe_(universe), words_((universe + kBits - 1) / kBits, 0) {}

Event Event::from_indices(std::size_t universe, std::span<const std::size_t> members) {
  Event e(universe);
  for (std::size_t i : members) e.insert(i);
  return e;
}

Event Event::from_indices(std::size_t universe, std::initializer_list<std::size_t> members) {
  return from_indices(universe, std::span<const std::size_t>(members.begin(), members.size()));
}

Event Event::full(std::size_t universe) {
  Event e(universe);
  for (std::size_t i = 0; i < universe; ++i) e.insert(i);
  return e;
}

bool Event::contains(std::size_t i) const {
  if (i >= universe_) return false;
  return (words_[i / kBits] >> (i % kBits)) & 1U;
}

void Event::insert(std::size_t i) {
  if (i >= universe_)
    throw Error(ErrorCode::kIndexOutOfRange,
                "history index " + std::to_string(i) + " outside space of size " + std::to_string(universe_));
  words_[i / kBits] |= std::uint64_t{1} << (i % kBits);
}

void Event::erase(std::size_t i) {
  if (i < universe_) words_[i / kBits] &= ~(std::uint64_t{1} << (i % kBits));
}

std::size_t Event::count() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Event::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::size_t> Event::members() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(w * kBits + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

void Event::check_same_universe(const Event& other) const {
  if (universe_ != other.universe_)
    throw Error(ErrorCode::kLabelMismatch, "events belong to history spaces of different size");
}

bool Event::is_subset_of(const Event& other) const {
  check_same_universe(other);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  return true;
}

bool Event::intersects(const Event& other) const {
  check_same_universe(other);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & other.words_[w]) != 0) return true;
  return false;
}

Event Event::complement() const {
  Event out(universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = ~words_[w];
  if (const std::size_t tail = universe_ % kBits; tail != 0 && !out.words_.empty())
    out.words_.back() &= (std::uint64_t{1} << tail) - 1;
  return out;
}

Event Event::operator|(const Event& other) const {
  check_same_universe(other);
  Event out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] |= other.words_[w];
  return out;
}

Event Event::operator&(const Event& other) const {
  check_same_universe(other);
  Event out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= other.words_[w];
  return out;
}

Event Event::operator-(const Event& other) const {
  check_same_universe(other);
  Event out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= ~other.words_[w];
  return out;
}

bool canonical_less(const Event& a, const Event& b) {
  const std::size_t ca = a.count();
  const std::size_t cb = b.count();
  if (ca != cb) return ca < cb;
  return a.members() < b.members();
}

std::vector<std::string> event_labels(const Event& e, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (std::size_t i : e.members()) out.push_back(i < labels.size() ? labels[i] : "#" + std::to_string(i));
  return out;
}

std::string format_event(const Event& e, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (const std::string& l : event_labels(e, labels)) {
    if (!first) out += ',';
    out += l;
    first = false;
  }
  return out + "}";
}

Event event_from_labels(const std::vector<std::string>& members, const std::vector<std::string>& labels) {
  Event e(labels.size());
  for (const std::string& m : members) {
    const auto it = std::find(labels.begin(), labels.end(), m);
    if (it == labels.end()) throw Error(ErrorCode::kLabelMismatch, "unknown history label '" + m + "'");
    e.insert(static_cast<std::size_t>(it - labels.begin()));
  }
  return e;
}

}  // namespace coevent
