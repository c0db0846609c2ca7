#include "tracelens/compensate.hpp"

#include <algorithm>

#include "tracelens/error.hpp"

namespace tracelens {

CompensationModel derive(std::int64_t baseline_wall_ns, std::int64_t profiled_wall_ns) {
  if (baseline_wall_ns <= 0)
    fail(ErrorKind::ZeroWallTime, "baseline wall time must be positive");
  if (profiled_wall_ns <= 0)
    fail(ErrorKind::ZeroWallTime, "profiled wall time must be positive");
  CompensationModel model;
  model.baseline_wall_ns = baseline_wall_ns;
  model.profiled_wall_ns = profiled_wall_ns;
  model.scale = Rational::make(baseline_wall_ns, profiled_wall_ns);
  model.flagged = baseline_wall_ns > profiled_wall_ns;
  return model;
}

std::vector<OpRecord> apply(std::vector<OpRecord> records, const CompensationModel& model) {
  for (OpRecord& r : records) {
    r.raw_self_ns = r.self_ns;
    r.raw_total_ns = r.total_ns;
    r.self_ns = scale_round_half_even(r.self_ns, model.scale);
    r.total_ns = scale_round_half_even(r.total_ns, model.scale);
  }
  return records;
}

std::pair<std::vector<OpRecord>, std::int64_t> strip_profiler_artifacts(
    std::vector<OpRecord> records, const std::vector<std::string>& prefixes) {
  std::int64_t removed_ns = 0;
  auto matches = [&](const OpRecord& r) {
    for (const std::string& p : prefixes)
      if (r.name.size() >= p.size() && r.name.compare(0, p.size(), p) == 0) return true;
    return false;
  };
  std::vector<OpRecord> kept;
  kept.reserve(records.size());
  for (OpRecord& r : records) {
    if (matches(r))
      removed_ns += r.self_ns;
    else
      kept.push_back(std::move(r));
  }
  return {std::move(kept), removed_ns};
}

}  // namespace tracelens
