#include "tracelens/trace.hpp"

#include <cstdint>
#include <limits>
#include <string>

namespace tracelens {

namespace {

void check_event(const TraceEvent& ev, std::size_t index,
                 std::vector<Violation>& out) {
  const auto add = [&](const char* field, std::string message) {
    out.push_back(Violation{index, field, std::move(message)});
  };

  if (ev.duration_ns < 0)
    add("dur_ns", "duration is negative (" + std::to_string(ev.duration_ns) + ")");
  std::int64_t end = 0;
  if (__builtin_add_overflow(ev.start_ns, ev.duration_ns, &end))
    add("start_ns", "start + duration overflows a 64-bit signed count");
  if (ev.call_count < 1)
    add("count", "call count must be >= 1 (" + std::to_string(ev.call_count) + ")");
  if (ev.shapes) {
    for (const Shape& shape : *ev.shapes)
      for (std::int64_t dim : shape)
        if (dim < 1) add("shapes", "dimension " + std::to_string(dim) + " is < 1");
  }
  if (ev.bytes_moved && *ev.bytes_moved < 0)
    add("bytes", "bytes moved is negative");
  if (ev.self_ns) {
    if (*ev.self_ns < 0)
      add("self_ns", "self time is negative");
    else if (ev.duration_ns >= 0 && *ev.self_ns > ev.duration_ns)
      add("self_ns", "self time exceeds total time");
  }
}

}  // namespace

std::vector<Violation> validate(const TraceSet& set) {
  std::vector<Violation> out;
  if (set.label.empty())
    out.push_back(Violation{std::nullopt, "label", "label is empty"});
  if (set.wall_time_ns && *set.wall_time_ns < 0)
    out.push_back(Violation{std::nullopt, "wall_time_ns", "wall time is negative"});
  for (std::size_t i = 0; i < set.events.size(); ++i)
    check_event(set.events[i], i, out);
  return out;
}

}  // namespace tracelens
