#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tracelens/calltree.hpp"
#include "tracelens/rational.hpp"

namespace tracelens {

// Profiler-overhead model: a uniform rescale of measured times by the ratio
// of the unprofiled wall time to the profiled wall time.
struct CompensationModel {
  std::int64_t baseline_wall_ns = 0;
  std::int64_t profiled_wall_ns = 0;
  Rational scale;       // baseline / profiled, exact
  bool flagged = false;  // scale > 1: baseline slower than the profiled run

  friend bool operator==(const CompensationModel&, const CompensationModel&) = default;
};

// Errors: ZeroWallTime when either wall time is not positive.
CompensationModel derive(std::int64_t baseline_wall_ns, std::int64_t profiled_wall_ns);

// Multiplies every self/total duration by the scale, rounding half to even.
// Originals are kept in raw_self_ns/raw_total_ns. Rank order of durations is
// preserved; per-record rounding error is at most half a nanosecond.
std::vector<OpRecord> apply(std::vector<OpRecord> records, const CompensationModel& model);

// Removes records whose name starts with a profiler-internal prefix and
// returns the stripped records plus the total self time removed (for the
// report footnote).
std::pair<std::vector<OpRecord>, std::int64_t> strip_profiler_artifacts(
    std::vector<OpRecord> records, const std::vector<std::string>& prefixes);

}  // namespace tracelens
