#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tracelens/trace.hpp"

namespace tracelens {

// One row of a flat call-statistics profile (tottime/cumtime pair as
// self/total).
struct FlatProfileEntry {
  std::string name;
  std::int64_t call_count = 1;
  std::int64_t self_ns = 0;
  std::int64_t total_ns = 0;

  friend bool operator==(const FlatProfileEntry&, const FlatProfileEntry&) = default;
};

struct IngestOptions {
  bool strict = false;  // reject unknown canonical fields instead of warning

  // Names starting with one of these are tagged profiler_internal (but kept;
  // overhead handling is the compensate module's job).
  std::vector<std::string> profiler_prefixes = {"ProfilerStep", "profiler::"};
};

// Parses a trace-event JSON export (an array or {"traceEvents": [...]}):
// complete events plus begin/end pairs matched per lane. Timestamps and
// durations are microseconds; conversion to ns rounds half to even.
// Errors: MalformedInput, UnmatchedSpan.
TraceSet parse_span_trace(std::string_view bytes, std::string label,
                          const IngestOptions& options = {},
                          std::vector<std::string>* warnings = nullptr);

// Parses a flat call-statistics profile: either Python-cProfile-style text
// (ncalls/tottime/cumtime columns, seconds) or a delimited name/count/self/
// total table (durations via parse_duration). Errors: MalformedInput,
// NegativeTime.
TraceSet parse_flat_profile(std::string_view bytes, std::string label,
                            const IngestOptions& options = {});

// Canonical trace file: {"label", "wall_time_ns", "events": [...]}.
// Unknown fields are an error in strict mode, a warning otherwise.
TraceSet parse_canonical(std::string_view bytes, const IngestOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);

// Lossless inverse of parse_canonical: parse(emit(s)) == s, and emitted
// bytes are stable across round trips.
std::string emit_canonical(const TraceSet& set);

// Rows of a flat profile, exposed for inspection and tests.
std::vector<FlatProfileEntry> parse_flat_entries(std::string_view bytes);

// "90ms", "1.5s", "250us", or a bare integer nanosecond count.
// Fractional values round half to even at nanosecond resolution.
std::int64_t parse_duration(std::string_view text);

// Transparent gzip: returns the inflated bytes when the gzip magic is
// present, the input unchanged otherwise.
std::string gunzip_if_needed(std::string_view bytes);

// Reads a file ("-" = stdin), inflating gzip transparently.
std::string read_file(const std::string& path);

// Convenience wrapper: read + sniff/choose format + parse.
// format is one of "span", "flat", "canonical", "auto".
TraceSet read_trace(const std::string& path, std::string_view format = "auto",
                    std::string label = "", const IngestOptions& options = {},
                    std::vector<std::string>* warnings = nullptr);

}  // namespace tracelens
