#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tracelens/calltree.hpp"
#include "tracelens/trace.hpp"

namespace tracelens::testing {

inline std::string repo_file(const std::string& relative) {
  return std::string(TRACELENS_REPO_DIR) + "/" + relative;
}

using Rng = std::mt19937_64;

inline std::int64_t rand_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// ---------------------------------------------------------------------------
// Random call trees (proper nesting by construction)
// ---------------------------------------------------------------------------

struct TreeParams {
  int max_depth = 12;
  int max_fanout = 8;
  std::int64_t max_root_ns = 20000;
  int max_nodes = 400;
};

namespace detail {

inline void gen_children(Rng& rng, const TreeParams& p, const std::string& lane,
                         std::int64_t start, std::int64_t dur, int depth, int& budget,
                         std::vector<TraceEvent>& out) {
  if (depth >= p.max_depth || dur <= 0 || budget <= 0) return;
  const int fanout = static_cast<int>(rand_int(rng, 0, p.max_fanout));
  if (fanout == 0) return;

  // 2*fanout sorted cut points carve disjoint child intervals; shared
  // boundaries with the parent or between siblings are legal.
  std::vector<std::int64_t> cuts;
  for (int i = 0; i < 2 * fanout; ++i) cuts.push_back(rand_int(rng, 0, dur));
  std::sort(cuts.begin(), cuts.end());
  for (int i = 0; i + 1 < static_cast<int>(cuts.size()); i += 2) {
    if (budget <= 0) return;
    const std::int64_t child_start = start + cuts[i];
    const std::int64_t child_dur = cuts[i + 1] - cuts[i];
    TraceEvent ev;
    ev.name = "op_" + std::to_string(out.size());
    ev.lane_id = lane;
    ev.start_ns = child_start;
    ev.duration_ns = child_dur;
    out.push_back(ev);
    --budget;
    gen_children(rng, p, lane, child_start, child_dur, depth + 1, budget, out);
  }
}

}  // namespace detail

// One random tree rooted at [0, dur) on the given lane; events in random
// order (the builder must not rely on input order beyond tie-breaking).
inline std::vector<TraceEvent> random_tree(Rng& rng, const TreeParams& p,
                                           const std::string& lane = "t0") {
  std::vector<TraceEvent> events;
  TraceEvent root;
  root.name = "root";
  root.lane_id = lane;
  root.start_ns = 0;
  root.duration_ns = rand_int(rng, 1, p.max_root_ns);
  events.push_back(root);
  int budget = p.max_nodes - 1;
  detail::gen_children(rng, p, lane, 0, root.duration_ns, 1, budget, events);
  std::shuffle(events.begin() + 1, events.end(), rng);
  return events;
}

// ---------------------------------------------------------------------------
// Nanosecond-painting oracle for self times
// ---------------------------------------------------------------------------
// Paints node ownership over the root interval, parents first so descendants
// override; a node's self time is the count of nanoseconds it still owns.

namespace detail {

inline void paint(const CallNode& node, std::int64_t origin, std::int32_t id,
                  std::vector<std::int32_t>& owner, std::int32_t& next_id) {
  for (std::int64_t t = node.event.start_ns - origin; t < node.event.end_ns() - origin; ++t)
    owner[static_cast<std::size_t>(t)] = id;
  for (const CallNode& child : node.children) {
    const std::int32_t child_id = next_id++;
    paint(child, origin, child_id, owner, next_id);
  }
}

inline void collect_expected(const CallNode& node, const std::vector<std::int64_t>& owned,
                             std::int32_t& id, std::vector<std::int64_t>& expected) {
  expected.push_back(owned[static_cast<std::size_t>(id)]);
  ++id;
  for (const CallNode& child : node.children) collect_expected(child, owned, id, expected);
}

inline void collect_actual(const CallNode& node, std::vector<std::int64_t>& actual) {
  actual.push_back(node.self_ns);
  for (const CallNode& child : node.children) collect_actual(child, actual);
}

}  // namespace detail

// Returns (actual self list, painted self list) in matching DFS order.
inline std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> painted_self_times(
    const CallNode& root) {
  std::vector<std::int32_t> owner(static_cast<std::size_t>(root.event.duration_ns), -1);
  std::int32_t next_id = 1;
  detail::paint(root, root.event.start_ns, 0, owner, next_id);

  std::vector<std::int64_t> owned(static_cast<std::size_t>(next_id), 0);
  for (std::int32_t id : owner)
    if (id >= 0) ++owned[static_cast<std::size_t>(id)];

  std::vector<std::int64_t> expected;
  std::int32_t id = 0;
  detail::collect_expected(root, owned, id, expected);
  std::vector<std::int64_t> actual;
  detail::collect_actual(root, actual);
  return {actual, expected};
}

// ---------------------------------------------------------------------------
// Random valid TraceSets (canonical-representable)
// ---------------------------------------------------------------------------

inline TraceSet random_trace_set(Rng& rng, std::size_t max_events = 12) {
  static const char* kNames[] = {
      "aten::addmm", "aten::relu",        "Memcpy HtoD (Pageable -> Device)",
      "aten::to",    "aten::view",        "torchvision::nms",
      "frobnicate",  "a,b\"quoted\"name", "ProfilerStep#7",
  };
  static const char* kLanes[] = {"thread-1", "stream-7", "main"};

  TraceSet set;
  set.label = "run-" + std::to_string(rand_int(rng, 0, 999));
  if (rand_int(rng, 0, 1)) set.wall_time_ns = rand_int(rng, 0, 1'000'000'000);
  set.source_format = SourceFormat::Canonical;

  const std::size_t count = static_cast<std::size_t>(rand_int(rng, 0, max_events));
  for (std::size_t i = 0; i < count; ++i) {
    TraceEvent ev;
    ev.name = kNames[rand_int(rng, 0, std::size(kNames) - 1)];
    ev.lane_id = kLanes[rand_int(rng, 0, std::size(kLanes) - 1)];
    ev.device = rand_int(rng, 0, 1) ? Device::Gpu : Device::Cpu;
    ev.start_ns = rand_int(rng, 0, 1'000'000);
    ev.duration_ns = rand_int(rng, 0, 1'000'000);
    ev.call_count = rand_int(rng, 1, 1000);
    if (rand_int(rng, 0, 2) == 0) {
      std::vector<Shape> shapes;
      const int rank = static_cast<int>(rand_int(rng, 1, 3));
      for (int s = 0; s < 2; ++s) {
        Shape shape;
        for (int d = 0; d < rank; ++d) shape.push_back(rand_int(rng, 1, 4096));
        shapes.push_back(shape);
      }
      ev.shapes = shapes;
    }
    if (rand_int(rng, 0, 3) == 0) ev.bytes_moved = rand_int(rng, 0, 1'000'000'000);
    if (rand_int(rng, 0, 3) == 0) ev.self_ns = rand_int(rng, 0, ev.duration_ns);
    ev.profiler_internal = ev.name.rfind("ProfilerStep", 0) == 0;
    set.events.push_back(std::move(ev));
  }
  return set;
}

}  // namespace tracelens::testing
