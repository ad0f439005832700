#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ddca {

using Seconds = double;

/// One occurrence of an antigen type (for example a process name or PID).
struct AntigenEvent {
  Seconds time = 0.0;
  std::string antigen_type;

  friend bool operator==(const AntigenEvent&, const AntigenEvent&) = default;
};

/// A normalized (danger, safe) pair observed at one instant.
struct SignalInstance {
  Seconds time = 0.0;
  double danger = 0.0;
  double safe = 0.0;

  friend bool operator==(const SignalInstance&, const SignalInstance&) = default;
};

using Event = std::variant<AntigenEvent, SignalInstance>;

inline Seconds event_time(const Event& event) {
  return std::visit([](const auto& e) { return e.time; }, event);
}

inline bool is_signal(const Event& event) { return std::holds_alternative<SignalInstance>(event); }

// Orders events by time; at equal times antigens come before signals.
inline bool event_before(const Event& a, const Event& b) {
  const Seconds ta = event_time(a);
  const Seconds tb = event_time(b);
  if (ta != tb) return ta < tb;
  return !is_signal(a) && is_signal(b);
}

inline constexpr double kDefaultNormalizationMax = 50.0;

struct StreamMetadata {
  std::string source;
  std::optional<std::uint64_t> seed;
  double normalization_max = kDefaultNormalizationMax;

  friend bool operator==(const StreamMetadata&, const StreamMetadata&) = default;
};

struct EventStream {
  std::vector<Event> events;
  StreamMetadata metadata;

  std::vector<SignalInstance> signals() const {
    std::vector<SignalInstance> out;
    for (const auto& e : events) {
      if (const auto* s = std::get_if<SignalInstance>(&e)) out.push_back(*s);
    }
    return out;
  }

  std::size_t antigen_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const Event& e) { return !is_signal(e); }));
  }
};

/// Per-type antigen counts, kept as a small array sorted by type label.
class AntigenProfile {
 public:
  using Entry = std::pair<std::string, std::uint64_t>;

  void add(std::string_view type, std::uint64_t n = 1) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), type,
                               [](const Entry& e, std::string_view t) { return e.first < t; });
    if (it != entries_.end() && it->first == type) {
      it->second += n;
    } else {
      entries_.emplace(it, std::string(type), n);
    }
  }

  void merge(const AntigenProfile& other) {
    for (const auto& [type, n] : other.entries_) add(type, n);
  }

  std::uint64_t count(std::string_view type) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), type,
                               [](const Entry& e, std::string_view t) { return e.first < t; });
    return (it != entries_.end() && it->first == type) ? it->second : 0;
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_) sum += e.second;
    return sum;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const AntigenProfile&, const AntigenProfile&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace ddca
