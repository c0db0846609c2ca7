#include "tracelens/compensate.hpp"

#include "doctest.h"
#include "helpers.hpp"
#include "tracelens/error.hpp"

using namespace tracelens;
namespace tt = tracelens::testing;
using tt::rand_int;

namespace {

OpRecord record(std::string name, std::int64_t self, std::int64_t total = -1) {
  OpRecord r;
  r.name = std::move(name);
  r.self_ns = self;
  r.total_ns = total < 0 ? self : total;
  return r;
}

}  // namespace

TEST_CASE("derive forms the exact baseline/profiled ratio") {
  const CompensationModel m = derive(90'000'000, 100'000'000);
  CHECK(m.scale == Rational::make(9, 10));
  CHECK_FALSE(m.flagged);

  CHECK(derive(5, 5).scale == Rational::make(1, 1));

  const CompensationModel slow = derive(110'000'000, 100'000'000);
  CHECK(slow.scale == Rational::make(11, 10));
  CHECK(slow.flagged);  // baseline slower than the profiled run
}

TEST_CASE("derive rejects non-positive wall times") {
  try {
    derive(0, 10);
    FAIL("expected ZeroWallTime");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroWallTime);
  }
  CHECK_THROWS_AS(derive(10, 0), Error);
  CHECK_THROWS_AS(derive(-1, 10), Error);
}

TEST_CASE("apply scales durations and keeps the originals") {
  const CompensationModel m = derive(9, 10);
  const auto scaled = tracelens::apply({record("op", 100, 120)}, m);
  REQUIRE(scaled.size() == 1);
  CHECK(scaled[0].self_ns == 90);
  CHECK(scaled[0].total_ns == 108);
  CHECK(scaled[0].raw_self_ns == 100);
  CHECK(scaled[0].raw_total_ns == 120);
}

TEST_CASE("apply with scale 1 is the identity on durations") {
  const CompensationModel m = derive(12345, 12345);
  tt::Rng rng(5);
  std::vector<OpRecord> records;
  for (int i = 0; i < 200; ++i)
    records.push_back(record("r" + std::to_string(i), rand_int(rng, 0, 1'000'000'000)));
  const auto scaled = tracelens::apply(records, m);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(scaled[i].self_ns == records[i].self_ns);
    CHECK(scaled[i].total_ns == records[i].total_ns);
  }
}

TEST_CASE("apply rounds half to even") {
  const CompensationModel m = derive(1, 2);  // scale 1/2
  const auto scaled = tracelens::apply({record("a", 3), record("b", 5)}, m);
  CHECK(scaled[0].self_ns == 2);  // 1.5 -> 2
  CHECK(scaled[1].self_ns == 2);  // 2.5 -> 2
}

TEST_CASE("random records: rounded sum stays within the per-record bound") {
  tt::Rng rng(246810);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t baseline = rand_int(rng, 1, 1'000'000);
    const std::int64_t profiled = rand_int(rng, 1, 1'000'000);
    const CompensationModel m = derive(baseline, profiled);

    std::vector<OpRecord> records;
    const int n = static_cast<int>(rand_int(rng, 1, 100));
    for (int i = 0; i < n; ++i)
      records.push_back(record("r", rand_int(rng, 0, 1'000'000'000'000)));
    const auto scaled = tracelens::apply(records, m);

    // |sum(scaled) - scale * sum(raw)| <= N/2 ns, checked exactly:
    // |sum(scaled)*den - num*sum(raw)| <= N/2 * den.
    int128_t scaled_sum = 0;
    int128_t raw_sum = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      scaled_sum += scaled[i].self_ns;
      raw_sum += records[i].self_ns;
    }
    int128_t delta = scaled_sum * m.scale.den - static_cast<int128_t>(m.scale.num) * raw_sum;
    if (delta < 0) delta = -delta;
    CHECK(delta * 2 <= static_cast<int128_t>(n) * m.scale.den);
  }
}

TEST_CASE("apply preserves the rank order of durations") {
  tt::Rng rng(13);
  const CompensationModel m = derive(rand_int(rng, 1, 999), 1000);
  std::vector<OpRecord> records;
  for (int i = 0; i < 500; ++i)
    records.push_back(record("r", rand_int(rng, 0, 1'000'000'000)));
  const auto scaled = tracelens::apply(records, m);
  for (std::size_t i = 0; i + 1 < records.size(); ++i)
    for (std::size_t j = i + 1; j < std::min(records.size(), i + 10); ++j)
      if (records[i].self_ns < records[j].self_ns)
        CHECK(scaled[i].self_ns <= scaled[j].self_ns);
}

TEST_CASE("strip_profiler_artifacts removes prefixed records and sums them") {
  const std::vector<std::string> prefixes = {"ProfilerStep", "profiler::"};
  auto [kept, removed] = strip_profiler_artifacts(
      {record("ProfilerStep#3", 400), record("aten::add", 100),
       record("profiler::collect", 50)},
      prefixes);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].name == "aten::add");
  CHECK(removed == 450);
}

TEST_CASE("strip with no matches is the identity") {
  const auto [kept, removed] =
      strip_profiler_artifacts({record("a", 1), record("b", 2)}, {"ProfilerStep"});
  CHECK(kept.size() == 2);
  CHECK(removed == 0);
}

TEST_CASE("strip finds planted artifacts exactly") {
  tt::Rng rng(9000);
  std::vector<OpRecord> records;
  std::int64_t planted = 0;
  for (int i = 0; i < 300; ++i) {
    const bool artifact = rand_int(rng, 0, 3) == 0;
    const std::int64_t self = rand_int(rng, 0, 1'000'000);
    if (artifact) planted += self;
    records.push_back(
        record(artifact ? "ProfilerStep#" + std::to_string(i) : "op_" + std::to_string(i), self));
  }
  const auto [kept, removed] = strip_profiler_artifacts(records, {"ProfilerStep"});
  CHECK(removed == planted);
}

TEST_CASE("strip and apply commute") {
  tt::Rng rng(808);
  const CompensationModel m = derive(7, 9);
  std::vector<OpRecord> records;
  for (int i = 0; i < 100; ++i) {
    const bool artifact = rand_int(rng, 0, 2) == 0;
    records.push_back(record(artifact ? "profiler::x" + std::to_string(i)
                                      : "op" + std::to_string(i),
                             rand_int(rng, 0, 1'000'000)));
  }
  const std::vector<std::string> prefixes = {"profiler::"};

  auto strip_then_apply = tracelens::apply(strip_profiler_artifacts(records, prefixes).first, m);
  auto apply_then_strip = strip_profiler_artifacts(tracelens::apply(records, m), prefixes).first;
  CHECK(strip_then_apply == apply_then_strip);
}
