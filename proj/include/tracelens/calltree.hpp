#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracelens/taxonomy.hpp"
#include "tracelens/trace.hpp"

namespace tracelens {

// Node of a per-lane call tree. Children are disjoint in time, sorted by
// start, and contained in the parent interval (shared boundaries are legal).
// self_ns = duration minus the sum of direct-children durations.
struct CallNode {
  TraceEvent event;
  std::int64_t self_ns = 0;
  std::vector<CallNode> children;
};

// Call trees of one lane (one CPU thread or GPU stream).
struct LaneForest {
  std::string lane_id;
  std::vector<CallNode> roots;  // maximal spans, sorted by start
};

using Forest = std::vector<LaneForest>;  // lanes sorted by id

struct BuildOptions {
  // Truncate the later span to the containment boundary instead of raising
  // PartialOverlap; the clipped amount is reported.
  bool clip_partial_overlap = false;
};

struct BuildReport {
  std::int64_t clipped_ns = 0;
  std::vector<std::string> warnings;
};

// Nests spans by interval containment, per lane. Roots are maximal spans.
// Spans with identical intervals nest later-in-input under earlier-in-input.
// Errors: PartialOverlap (unless clipping), UnsupportedFormat for flat sets.
Forest build_forest(const TraceSet& set, const BuildOptions& options = {},
                    BuildReport* report = nullptr);

// Fills self_ns for every node: duration minus direct-children durations.
// Conservation: per root, the subtree self sum equals the root duration.
void compute_self_times(Forest& forest);

// The unit of classification and aggregation.
struct OpRecord {
  std::string name;
  Device device = Device::Cpu;
  std::string lane_id;
  std::int64_t self_ns = 0;
  std::int64_t total_ns = 0;
  std::int64_t call_count = 1;
  std::optional<std::vector<Shape>> shapes;
  std::optional<CategoryId> category;        // filled by classify_all
  std::optional<std::int64_t> raw_self_ns;   // pre-compensation values
  std::optional<std::int64_t> raw_total_ns;
  bool profiler_internal = false;

  friend bool operator==(const OpRecord&, const OpRecord&) = default;
};

// One record per node, lanes in id order, nodes in depth-first span order.
std::vector<OpRecord> flatten(const Forest& forest);

// Flat profiles bypass tree reconstruction; the profile's own self/total
// values are carried over unchanged.
std::vector<OpRecord> flatten_flat(const TraceSet& set);

// Exact integer conservation check: per lane, sum of self over all nodes
// vs. the sum of root durations. Equal on every well-formed forest.
struct LaneConservation {
  std::string lane_id;
  std::int64_t self_sum = 0;
  std::int64_t root_sum = 0;
};
std::vector<LaneConservation> conservation(const Forest& forest);

}  // namespace tracelens
