#include "tracelens/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cfenv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <regex>
#include <sstream>

#include <zlib.h>
#include <nlohmann/json.hpp>

#include "tracelens/error.hpp"
#include "tracelens/rational.hpp"

namespace tracelens {

using json = nlohmann::json;

namespace {

bool starts_with_any(const std::string& name, const std::vector<std::string>& prefixes) {
  for (const std::string& p : prefixes)
    if (name.size() >= p.size() && name.compare(0, p.size(), p) == 0) return true;
  return false;
}

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

// Microseconds (trace-event convention) to integer nanoseconds, ties to even.
std::int64_t us_to_ns(double us) {
  const long double ns = static_cast<long double>(us) * 1000.0L;
  if (!(ns >= static_cast<long double>(INT64_MIN) && ns <= static_cast<long double>(INT64_MAX)))
    fail(ErrorKind::Overflow, "timestamp does not fit in 64-bit nanoseconds");
  return static_cast<std::int64_t>(std::rintl(ns));  // FE_TONEAREST: half to even
}

std::int64_t seconds_to_ns(double seconds) {
  const long double ns = static_cast<long double>(seconds) * 1e9L;
  if (!(ns >= static_cast<long double>(INT64_MIN) && ns <= static_cast<long double>(INT64_MAX)))
    fail(ErrorKind::Overflow, "time does not fit in 64-bit nanoseconds");
  return static_cast<std::int64_t>(std::rintl(ns));
}

std::string id_to_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  fail(ErrorKind::MalformedInput, "thread/stream id must be a string or integer");
}

bool cat_is_gpu(const std::string& cat) {
  std::string lower(cat);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower.find("gpu") != std::string::npos || lower.find("cuda") != std::string::npos ||
         lower.find("kernel") != std::string::npos;
}

std::vector<Shape> shapes_from_json(const json& dims) {
  std::vector<Shape> shapes;
  if (!dims.is_array()) fail(ErrorKind::MalformedInput, "tensor dims must be an array");
  bool flat_ints = !dims.empty() && dims.front().is_number_integer();
  if (flat_ints) {
    Shape s;
    for (const json& d : dims) s.push_back(d.get<std::int64_t>());
    shapes.push_back(std::move(s));
    return shapes;
  }
  for (const json& entry : dims) {
    Shape s;
    if (entry.is_array()) {
      for (const json& d : entry) {
        if (!d.is_number()) fail(ErrorKind::MalformedInput, "tensor dim is not a number");
        s.push_back(d.get<std::int64_t>());
      }
    } else if (entry.is_number()) {
      s.push_back(entry.get<std::int64_t>());
    } else {
      fail(ErrorKind::MalformedInput, "tensor dims entry is neither list nor number");
    }
    shapes.push_back(std::move(s));
  }
  return shapes;
}

// Shape metadata keys, searched in order; first hit wins.
const char* const kShapeKeys[] = {"Input Dims", "input_dims", "shapes"};

void apply_args(const json& args, TraceEvent& ev) {
  if (!args.is_object()) return;
  for (const char* key : kShapeKeys) {
    const auto it = args.find(key);
    if (it != args.end() && !it->is_null()) {
      ev.shapes = shapes_from_json(*it);
      break;
    }
  }
  for (const char* key : {"bytes", "Bytes"}) {
    const auto it = args.find(key);
    if (it != args.end() && it->is_number_integer()) {
      ev.bytes_moved = it->get<std::int64_t>();
      break;
    }
  }
  if (args.contains("stream")) ev.device = Device::Gpu;
}

}  // namespace

// ---------------------------------------------------------------------------
// Span traces (trace-event JSON)
// ---------------------------------------------------------------------------

TraceSet parse_span_trace(std::string_view bytes, std::string label,
                          const IngestOptions& options, std::vector<std::string>* warnings) {
  const std::string inflated = gunzip_if_needed(bytes);

  json doc;
  try {
    doc = json::parse(inflated);
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("span trace is not valid JSON: ") + e.what());
  }

  const json* events_json = nullptr;
  if (doc.is_array()) {
    events_json = &doc;
  } else if (doc.is_object() && doc.contains("traceEvents") && doc["traceEvents"].is_array()) {
    events_json = &doc["traceEvents"];
  } else {
    fail(ErrorKind::MalformedInput,
         "span trace must be an event array or an object with 'traceEvents'");
  }

  struct Pending {
    TraceEvent event;   // start filled, duration pending
    std::size_t seq;    // begin order, for order-preserving output
  };
  std::map<std::string, std::vector<Pending>> open;  // per-lane begin stacks
  std::vector<std::pair<std::size_t, TraceEvent>> completed;
  std::size_t seq = 0;

  for (const json& e : *events_json) {
    if (!e.is_object()) fail(ErrorKind::MalformedInput, "trace event is not an object");
    const std::string ph = e.value("ph", "X");
    if (ph != "X" && ph != "B" && ph != "E") continue;  // metadata, counters, flows

    TraceEvent ev;
    ev.call_count = 1;
    if (e.contains("tid"))
      ev.lane_id = id_to_string(e["tid"]);
    else if (e.contains("pid"))
      ev.lane_id = id_to_string(e["pid"]);
    else
      ev.lane_id = "0";
    if (e.contains("cat") && e["cat"].is_string() && cat_is_gpu(e["cat"].get<std::string>()))
      ev.device = Device::Gpu;
    if (e.contains("args")) apply_args(e["args"], ev);

    if (!e.contains("ts") || !e["ts"].is_number())
      fail(ErrorKind::MalformedInput, "trace event is missing a numeric 'ts'");
    const std::int64_t ts_ns = us_to_ns(e["ts"].get<double>());

    if (ph == "E") {
      auto& stack = open[ev.lane_id];
      const std::string end_name = e.value("name", "");
      if (stack.empty())
        fail(ErrorKind::UnmatchedSpan,
             "end without begin on lane '" + ev.lane_id + "' (name '" + end_name + "')");
      Pending pending = std::move(stack.back());
      stack.pop_back();
      if (!end_name.empty() && end_name != pending.event.name)
        fail(ErrorKind::UnmatchedSpan, "end '" + end_name + "' does not match begin '" +
                                           pending.event.name + "' on lane '" + ev.lane_id + "'");
      if (ts_ns < pending.event.start_ns)
        fail(ErrorKind::NegativeTime, "end before begin for '" + pending.event.name +
                                          "' on lane '" + ev.lane_id + "'");
      pending.event.duration_ns = ts_ns - pending.event.start_ns;
      completed.emplace_back(pending.seq, std::move(pending.event));
      continue;
    }

    if (!e.contains("name") || !e["name"].is_string())
      fail(ErrorKind::MalformedInput, "trace event is missing a string 'name'");
    ev.name = e["name"].get<std::string>();
    ev.start_ns = ts_ns;

    if (ph == "B") {
      open[ev.lane_id].push_back(Pending{std::move(ev), seq++});
      continue;
    }

    // Complete event.
    if (e.contains("dur") && e["dur"].is_number()) {
      ev.duration_ns = us_to_ns(e["dur"].get<double>());
    } else {
      warn(warnings, "complete event '" + ev.name + "' has no duration; assuming 0");
    }
    if (ev.duration_ns < 0)
      fail(ErrorKind::NegativeTime, "negative duration for '" + ev.name + "'");
    completed.emplace_back(seq++, std::move(ev));
  }

  for (const auto& [lane, stack] : open) {
    if (!stack.empty())
      fail(ErrorKind::UnmatchedSpan, "begin without end on lane '" + lane + "' (name '" +
                                         stack.back().event.name + "')");
  }

  std::sort(completed.begin(), completed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  TraceSet set;
  set.label = std::move(label);
  set.source_format = SourceFormat::ChromeSpans;
  set.events.reserve(completed.size());
  for (auto& [_, ev] : completed) {
    ev.profiler_internal = starts_with_any(ev.name, options.profiler_prefixes);
    set.events.push_back(std::move(ev));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Flat call-statistics profiles
// ---------------------------------------------------------------------------

namespace {

const std::regex kCProfileHeader(R"(ncalls\s+tottime\s+percall\s+cumtime)");
const std::regex kCProfileRow(
    R"(^\s*(\d+)(?:/\d+)?\s+([0-9.eE+-]+)\s+[0-9.eE+-]+\s+([0-9.eE+-]+)\s+[0-9.eE+-]+\s+(.+?)\s*$)");

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, delim)) out.push_back(field);
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<FlatProfileEntry> parse_flat_entries(std::string_view bytes) {
  const std::string inflated = gunzip_if_needed(bytes);
  std::istringstream in(inflated);
  std::string line;

  // Sniff the format: a cProfile table has its characteristic header.
  bool cprofile = false;
  {
    std::istringstream sniff(inflated);
    std::string l;
    for (int i = 0; i < 40 && std::getline(sniff, l); ++i) {
      if (std::regex_search(l, kCProfileHeader)) {
        cprofile = true;
        break;
      }
    }
  }

  std::vector<FlatProfileEntry> entries;

  if (cprofile) {
    bool past_header = false;
    while (std::getline(in, line)) {
      if (!past_header) {
        if (std::regex_search(line, kCProfileHeader)) past_header = true;
        continue;
      }
      if (trimmed(line).empty()) continue;
      std::smatch m;
      if (!std::regex_match(line, m, kCProfileRow))
        fail(ErrorKind::MalformedInput, "unparseable profile row: '" + line + "'");
      FlatProfileEntry entry;
      entry.name = m[4];
      entry.call_count = std::stoll(m[1]);
      entry.self_ns = seconds_to_ns(std::stod(m[2]));
      entry.total_ns = seconds_to_ns(std::stod(m[3]));
      entries.push_back(std::move(entry));
    }
    if (!past_header)
      fail(ErrorKind::MalformedInput, "cProfile table header not found");
    return entries;
  }

  // Delimited name/count/self/total table; tab or comma, optional header.
  bool first = true;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> fields = split_fields(line, delim);
    if (first) {
      first = false;
      if (!fields.empty() && trimmed(fields[0]) == "name") continue;  // header row
    }
    if (fields.size() != 4)
      fail(ErrorKind::MalformedInput,
           "flat profile rows need 4 fields (name, count, self, total): '" + line + "'");
    FlatProfileEntry entry;
    entry.name = trimmed(fields[0]);
    try {
      entry.call_count = std::stoll(trimmed(fields[1]));
    } catch (const std::logic_error&) {
      fail(ErrorKind::MalformedInput, "bad call count in '" + line + "'");
    }
    entry.self_ns = parse_duration(trimmed(fields[2]));
    entry.total_ns = parse_duration(trimmed(fields[3]));
    entries.push_back(std::move(entry));
  }
  return entries;
}

TraceSet parse_flat_profile(std::string_view bytes, std::string label,
                            const IngestOptions& options) {
  std::vector<FlatProfileEntry> entries = parse_flat_entries(bytes);

  TraceSet set;
  set.label = std::move(label);
  set.source_format = SourceFormat::FlatProfile;
  set.events.reserve(entries.size());
  for (FlatProfileEntry& entry : entries) {
    if (entry.self_ns < 0 || entry.total_ns < 0)
      fail(ErrorKind::NegativeTime, "negative time for '" + entry.name + "'");
    if (entry.total_ns < entry.self_ns)
      fail(ErrorKind::NegativeTime, "total < self for '" + entry.name + "' (" +
                                        std::to_string(entry.total_ns) + " < " +
                                        std::to_string(entry.self_ns) + ")");
    if (entry.call_count < 1)
      fail(ErrorKind::MalformedInput, "call count < 1 for '" + entry.name + "'");
    TraceEvent ev;
    ev.name = std::move(entry.name);
    ev.lane_id = "main";
    ev.device = Device::Cpu;
    ev.start_ns = 0;
    ev.duration_ns = entry.total_ns;
    ev.self_ns = entry.self_ns;
    ev.call_count = entry.call_count;
    ev.profiler_internal = starts_with_any(ev.name, options.profiler_prefixes);
    set.events.push_back(std::move(ev));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Canonical format
// ---------------------------------------------------------------------------

namespace {

const char* const kEventKeys[] = {"name", "lane",  "device", "start_ns", "dur_ns",
                                  "count", "shapes", "bytes",  "self_ns"};
const char* const kTopKeys[] = {"label", "wall_time_ns", "events"};

void check_known_keys(const json& obj, const char* const* known, std::size_t n,
                      const char* where, bool strict, std::vector<std::string>* warnings) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (std::size_t i = 0; i < n; ++i)
      if (key == known[i]) {
        ok = true;
        break;
      }
    if (!ok) {
      if (strict)
        fail(ErrorKind::UnknownField,
             std::string("unknown field '") + key + "' in " + where + " (strict mode)");
      warn(warnings, std::string("ignoring unknown field '") + key + "' in " + where);
    }
  }
}

std::int64_t require_int(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(ErrorKind::MalformedInput, std::string(where) + " is missing '" + key + "'");
  if (!it->is_number_integer() && !it->is_number_unsigned())
    fail(ErrorKind::MalformedInput, std::string("'") + key + "' in " + where + " must be an integer");
  return it->get<std::int64_t>();
}

std::string require_str(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    fail(ErrorKind::MalformedInput, std::string(where) + " is missing '" + key + "'");
  if (!it->is_string())
    fail(ErrorKind::MalformedInput, std::string("'") + key + "' in " + where + " must be a string");
  return it->get<std::string>();
}

}  // namespace

TraceSet parse_canonical(std::string_view bytes, const IngestOptions& options,
                         std::vector<std::string>* warnings) {
  const std::string inflated = gunzip_if_needed(bytes);
  json doc;
  try {
    doc = json::parse(inflated);
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedInput, std::string("canonical trace is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::MalformedInput, "canonical trace must be a JSON object");
  check_known_keys(doc, kTopKeys, std::size(kTopKeys), "trace", options.strict, warnings);

  TraceSet set;
  set.source_format = SourceFormat::Canonical;
  set.label = require_str(doc, "label", "trace");
  if (doc.contains("wall_time_ns") && !doc["wall_time_ns"].is_null())
    set.wall_time_ns = require_int(doc, "wall_time_ns", "trace");

  const auto events_it = doc.find("events");
  if (events_it == doc.end() || !events_it->is_array())
    fail(ErrorKind::MalformedInput, "trace is missing the 'events' array");

  std::size_t index = 0;
  for (const json& e : *events_it) {
    const std::string where = "event " + std::to_string(index);
    if (!e.is_object()) fail(ErrorKind::MalformedInput, where + " is not an object");
    check_known_keys(e, kEventKeys, std::size(kEventKeys), where.c_str(), options.strict,
                     warnings);

    TraceEvent ev;
    ev.name = require_str(e, "name", where.c_str());
    ev.lane_id = require_str(e, "lane", where.c_str());
    const std::string device = require_str(e, "device", where.c_str());
    if (device == "cpu")
      ev.device = Device::Cpu;
    else if (device == "gpu")
      ev.device = Device::Gpu;
    else
      fail(ErrorKind::MalformedInput, where + ": device must be \"cpu\" or \"gpu\"");
    ev.start_ns = require_int(e, "start_ns", where.c_str());
    ev.duration_ns = require_int(e, "dur_ns", where.c_str());
    ev.call_count = require_int(e, "count", where.c_str());
    if (e.contains("shapes") && !e["shapes"].is_null()) ev.shapes = shapes_from_json(e["shapes"]);
    if (e.contains("bytes") && !e["bytes"].is_null())
      ev.bytes_moved = require_int(e, "bytes", where.c_str());
    if (e.contains("self_ns") && !e["self_ns"].is_null())
      ev.self_ns = require_int(e, "self_ns", where.c_str());
    ev.profiler_internal = starts_with_any(ev.name, options.profiler_prefixes);
    set.events.push_back(std::move(ev));
    ++index;
  }
  return set;
}

std::string emit_canonical(const TraceSet& set) {
  json events = json::array();
  for (const TraceEvent& ev : set.events) {
    json e;
    e["name"] = ev.name;
    e["lane"] = ev.lane_id;
    e["device"] = ev.device == Device::Cpu ? "cpu" : "gpu";
    e["start_ns"] = ev.start_ns;
    e["dur_ns"] = ev.duration_ns;
    e["count"] = ev.call_count;
    if (ev.shapes) {
      json shapes = json::array();
      for (const Shape& s : *ev.shapes) shapes.push_back(s);
      e["shapes"] = std::move(shapes);
    } else {
      e["shapes"] = nullptr;
    }
    e["bytes"] = ev.bytes_moved ? json(*ev.bytes_moved) : json(nullptr);
    if (ev.self_ns) e["self_ns"] = *ev.self_ns;
    events.push_back(std::move(e));
  }
  json doc;
  doc["label"] = set.label;
  doc["wall_time_ns"] = set.wall_time_ns ? json(*set.wall_time_ns) : json(nullptr);
  doc["events"] = std::move(events);
  return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Durations, gzip, files
// ---------------------------------------------------------------------------

std::int64_t parse_duration(std::string_view text) {
  std::string s = trimmed(std::string(text));
  if (s.empty()) fail(ErrorKind::MalformedInput, "empty duration");

  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }

  std::string int_part, frac_part;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    int_part.push_back(s[pos++]);
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      frac_part.push_back(s[pos++]);
  }
  if (int_part.empty() && frac_part.empty())
    fail(ErrorKind::MalformedInput, "bad duration '" + std::string(text) + "'");

  std::string unit = trimmed(s.substr(pos));
  int power = 0;  // powers of ten relative to nanoseconds
  if (unit.empty()) {
    if (!frac_part.empty())
      fail(ErrorKind::MalformedInput,
           "bare durations are nanoseconds; '" + std::string(text) + "' needs a unit");
    power = 0;
  } else if (unit == "ns") {
    power = 0;
  } else if (unit == "us" || unit == "µs") {
    power = 3;
  } else if (unit == "ms") {
    power = 6;
  } else if (unit == "s") {
    power = 9;
  } else {
    fail(ErrorKind::MalformedInput, "unknown duration unit '" + unit + "'");
  }

  int128_t value = 0;
  for (char c : int_part) {
    value = value * 10 + (c - '0');
    if (value > static_cast<int128_t>(INT64_MAX) * 1000000000)
      fail(ErrorKind::Overflow, "duration out of range");
  }
  for (int i = 0; i < power; ++i) value *= 10;

  // Fractional digits: the first `power` digits are exact; the rest round
  // half to even at nanosecond resolution.
  int128_t frac_scaled = 0;
  for (int i = 0; i < power && i < static_cast<int>(frac_part.size()); ++i)
    frac_scaled = frac_scaled * 10 + (frac_part[i] - '0');
  for (int i = static_cast<int>(frac_part.size()); i < power; ++i) frac_scaled *= 10;
  value += frac_scaled;

  if (static_cast<int>(frac_part.size()) > power) {
    const std::string rest = frac_part.substr(power);
    const bool tail_nonzero = rest.find_first_not_of('0', 1) != std::string::npos;
    if (rest[0] > '5' || (rest[0] == '5' && tail_nonzero)) {
      ++value;
    } else if (rest[0] == '5' && !tail_nonzero) {
      if ((value & 1) != 0) ++value;  // tie: round to even
    }
  }

  if (value > INT64_MAX) fail(ErrorKind::Overflow, "duration out of range");
  std::int64_t out = static_cast<std::int64_t>(value);
  return negative ? -out : out;
}

std::string gunzip_if_needed(std::string_view bytes) {
  if (bytes.size() < 2 || static_cast<unsigned char>(bytes[0]) != 0x1f ||
      static_cast<unsigned char>(bytes[1]) != 0x8b)
    return std::string(bytes);

  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK)  // +32: auto-detect gzip/zlib headers
    fail(ErrorKind::MalformedInput, "zlib initialization failed");

  std::string out;
  out.reserve(bytes.size() * 4);
  char buffer[1 << 15];
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  zs.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof(buffer);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      fail(ErrorKind::MalformedInput, "gzip stream is corrupt");
    }
    out.append(buffer, sizeof(buffer) - zs.avail_out);
  } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) fail(ErrorKind::MalformedInput, "gzip stream is truncated");
  return out;
}

std::string read_file(const std::string& path) {
  std::string raw;
  if (path == "-") {
    raw.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::MalformedInput, "cannot open '" + path + "'");
    raw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return gunzip_if_needed(raw);
}

namespace {

std::string label_from_path(const std::string& path) {
  if (path == "-") return "stdin";
  std::string base = path;
  const std::size_t slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);
  for (const char* ext : {".gz", ".json", ".trace", ".csv", ".tsv", ".txt"}) {
    if (base.size() > std::strlen(ext) &&
        base.compare(base.size() - std::strlen(ext), std::strlen(ext), ext) == 0)
      base = base.substr(0, base.size() - std::strlen(ext));
  }
  return base.empty() ? path : base;
}

}  // namespace

TraceSet read_trace(const std::string& path, std::string_view format, std::string label,
                    const IngestOptions& options, std::vector<std::string>* warnings) {
  const std::string bytes = read_file(path);
  if (label.empty()) label = label_from_path(path);

  std::string fmt(format);
  if (fmt == "auto") {
    fmt = "flat";
    const std::size_t first = bytes.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (bytes[first] == '{' || bytes[first] == '[')) {
      json doc = json::parse(bytes, nullptr, false);
      if (doc.is_array())
        fmt = "span";
      else if (doc.is_object())
        fmt = doc.contains("traceEvents") ? "span" : "canonical";
    }
  }

  if (fmt == "span") return parse_span_trace(bytes, std::move(label), options, warnings);
  if (fmt == "flat") return parse_flat_profile(bytes, std::move(label), options);
  if (fmt == "canonical") return parse_canonical(bytes, options, warnings);
  fail(ErrorKind::UnsupportedFormat, "unknown input format '" + fmt + "'");
}

}  // namespace tracelens
