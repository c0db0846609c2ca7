#include "tracelens/calltree.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tracelens/error.hpp"

namespace tracelens {

namespace {

struct PendingNode {
  TraceEvent event;
  std::vector<std::size_t> children;
};

std::string span_str(const TraceEvent& ev) {
  return "'" + ev.name + "' [" + std::to_string(ev.start_ns) + ", " +
         std::to_string(ev.end_ns()) + ") on lane '" + ev.lane_id + "'";
}

CallNode materialize(const std::vector<PendingNode>& arena, std::size_t index) {
  const PendingNode& pending = arena[index];
  CallNode node;
  node.event = pending.event;
  node.children.reserve(pending.children.size());
  for (std::size_t child : pending.children)
    node.children.push_back(materialize(arena, child));
  return node;
}

LaneForest build_lane(const std::string& lane_id, std::vector<TraceEvent> events,
                      const BuildOptions& options, BuildReport* report) {
  // Parents sort before children: by start, then longer span first, then
  // input order (so identical intervals nest later-in-input as the child).
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (events[a].start_ns != events[b].start_ns) return events[a].start_ns < events[b].start_ns;
    return events[a].duration_ns > events[b].duration_ns;
  });

  std::vector<PendingNode> arena;
  arena.reserve(events.size());
  std::vector<std::size_t> roots;
  std::vector<std::size_t> stack;  // indices into arena, innermost last

  for (std::size_t idx : order) {
    TraceEvent ev = std::move(events[idx]);
    if (ev.duration_ns < 0)
      fail(ErrorKind::MalformedInput, "negative duration for " + span_str(ev));

    while (!stack.empty()) {
      const TraceEvent& top = arena[stack.back()].event;
      if (ev.start_ns >= top.end_ns()) {  // fully after the open span
        stack.pop_back();
        continue;
      }
      if (ev.end_ns() <= top.end_ns()) break;  // contained (ties legal)
      // Overlap without containment.
      if (!options.clip_partial_overlap)
        fail(ErrorKind::PartialOverlap,
             span_str(top) + " and " + span_str(ev) + " overlap without containment");
      const std::int64_t clipped = ev.end_ns() - top.end_ns();
      ev.duration_ns = top.end_ns() - ev.start_ns;
      if (report) {
        report->clipped_ns += clipped;
        report->warnings.push_back("clipped " + std::to_string(clipped) + " ns from " +
                                   span_str(ev));
      }
      break;
    }

    arena.push_back(PendingNode{std::move(ev), {}});
    const std::size_t node = arena.size() - 1;
    if (stack.empty())
      roots.push_back(node);
    else
      arena[stack.back()].children.push_back(node);
    stack.push_back(node);
  }

  LaneForest lane;
  lane.lane_id = lane_id;
  lane.roots.reserve(roots.size());
  for (std::size_t root : roots) lane.roots.push_back(materialize(arena, root));
  return lane;
}

std::int64_t fill_self(CallNode& node) {
  std::int64_t children_total = 0;
  for (CallNode& child : node.children) {
    children_total += child.event.duration_ns;
    fill_self(child);
  }
  node.self_ns = node.event.duration_ns - children_total;
  if (node.self_ns < 0)
    fail(ErrorKind::NegativeSelf, "children of " + span_str(node.event) +
                                      " exceed the parent duration by " +
                                      std::to_string(-node.self_ns) + " ns");
  return node.self_ns;
}

void flatten_node(const CallNode& node, const std::string& lane_id,
                  std::vector<OpRecord>& out) {
  OpRecord rec;
  rec.name = node.event.name;
  rec.device = node.event.device;
  rec.lane_id = lane_id;
  rec.self_ns = node.self_ns;
  rec.total_ns = node.event.duration_ns;
  rec.call_count = node.event.call_count;
  rec.shapes = node.event.shapes;
  rec.profiler_internal = node.event.profiler_internal;
  out.push_back(std::move(rec));
  for (const CallNode& child : node.children) flatten_node(child, lane_id, out);
}

void sum_self(const CallNode& node, std::int64_t& acc) {
  acc += node.self_ns;
  for (const CallNode& child : node.children) sum_self(child, acc);
}

}  // namespace

Forest build_forest(const TraceSet& set, const BuildOptions& options, BuildReport* report) {
  if (set.source_format == SourceFormat::FlatProfile)
    fail(ErrorKind::UnsupportedFormat,
         "flat profiles carry no span structure; use flatten_flat");

  std::map<std::string, std::vector<TraceEvent>> lanes;  // ordered for determinism
  for (const TraceEvent& ev : set.events) lanes[ev.lane_id].push_back(ev);

  Forest forest;
  forest.reserve(lanes.size());
  for (auto& [lane_id, events] : lanes)
    forest.push_back(build_lane(lane_id, std::move(events), options, report));
  return forest;
}

void compute_self_times(Forest& forest) {
  for (LaneForest& lane : forest)
    for (CallNode& root : lane.roots) fill_self(root);
}

std::vector<OpRecord> flatten(const Forest& forest) {
  std::vector<OpRecord> out;
  for (const LaneForest& lane : forest)
    for (const CallNode& root : lane.roots) flatten_node(root, lane.lane_id, out);
  return out;
}

std::vector<OpRecord> flatten_flat(const TraceSet& set) {
  if (set.source_format != SourceFormat::FlatProfile)
    fail(ErrorKind::UnsupportedFormat, "flatten_flat expects a flat-profile trace set");
  std::vector<OpRecord> out;
  out.reserve(set.events.size());
  for (const TraceEvent& ev : set.events) {
    OpRecord rec;
    rec.name = ev.name;
    rec.device = ev.device;
    rec.lane_id = ev.lane_id;
    rec.self_ns = ev.self_ns.value_or(ev.duration_ns);
    rec.total_ns = ev.duration_ns;
    rec.call_count = ev.call_count;
    rec.shapes = ev.shapes;
    rec.profiler_internal = ev.profiler_internal;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<LaneConservation> conservation(const Forest& forest) {
  std::vector<LaneConservation> out;
  out.reserve(forest.size());
  for (const LaneForest& lane : forest) {
    LaneConservation c;
    c.lane_id = lane.lane_id;
    for (const CallNode& root : lane.roots) {
      c.root_sum += root.event.duration_ns;
      sum_self(root, c.self_sum);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace tracelens
