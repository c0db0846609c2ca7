#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tracelens {

enum class Device { Cpu, Gpu };

enum class SourceFormat { ChromeSpans, FlatProfile, Canonical };

inline const char* to_string(Device d) { return d == Device::Cpu ? "cpu" : "gpu"; }

// Dimension list of one input tensor.
using Shape = std::vector<std::int64_t>;

// One timed span (or flat-profile row) as observed by a profiler.
// Durations are integer nanoseconds throughout the library; parsers convert
// microsecond inputs with round-half-to-even.
struct TraceEvent {
  std::string name;
  std::string lane_id;        // CPU thread id or GPU stream id
  Device device = Device::Cpu;
  std::int64_t start_ns = 0;
  std::int64_t duration_ns = 0;
  std::int64_t call_count = 1;
  std::optional<std::vector<Shape>> shapes;  // one dimension list per input
  std::optional<std::int64_t> bytes_moved;   // explicit transfer size, copies only
  std::optional<std::int64_t> self_ns;       // flat-profile rows only
  bool profiler_internal = false;            // name matched a profiler prefix

  std::int64_t end_ns() const { return start_ns + duration_ns; }

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// One profiled run of one model or submodel. Immutable after construction;
// safe for concurrent reads.
struct TraceSet {
  std::string label;
  std::optional<std::int64_t> wall_time_ns;  // end-to-end run duration, if known
  SourceFormat source_format = SourceFormat::Canonical;
  std::vector<TraceEvent> events;

  friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

// A single invariant violation. Violations are data, not failures: validate
// reports all of them and never throws.
struct Violation {
  std::optional<std::size_t> event_index;  // absent for set-level violations
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Checks every TraceSet/TraceEvent invariant. Empty result iff well-formed.
std::vector<Violation> validate(const TraceSet& set);

}  // namespace tracelens
