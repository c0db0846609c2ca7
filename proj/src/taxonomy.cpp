#include "tracelens/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "tracelens/calltree.hpp"
#include "tracelens/error.hpp"

namespace tracelens {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && in_string) {
      ++i;
      continue;
    }
    if (c == '"') in_string = !in_string;
    if (c == '#' && !in_string) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

[[noreturn]] void malformed(int line, const std::string& what) {
  fail(ErrorKind::MalformedInput, "rule file line " + std::to_string(line) + ": " + what);
}

// Unescapes \" and \\; any other backslash passes through untouched so
// regex escapes like \d can be written directly.
std::string parse_quoted(std::string_view value, int line) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"')
    malformed(line, "expected a quoted string, got '" + std::string(value) + "'");
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    const char c = value[i];
    if (c == '\\' && i + 2 < value.size() && (value[i + 1] == '"' || value[i + 1] == '\\')) {
      out.push_back(value[i + 1]);
      ++i;
    } else if (c == '"') {
      malformed(line, "unescaped quote inside string");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> parse_string_array(std::string_view value, int line) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    malformed(line, "expected an array of quoted strings");
  std::vector<std::string> out;
  std::string_view inner(v);
  inner.remove_prefix(1);
  inner.remove_suffix(1);
  std::size_t pos = 0;
  while (pos < inner.size()) {
    while (pos < inner.size() && (std::isspace(static_cast<unsigned char>(inner[pos])) || inner[pos] == ','))
      ++pos;
    if (pos >= inner.size()) break;
    if (inner[pos] != '"') malformed(line, "array elements must be quoted strings");
    std::size_t end = pos + 1;
    while (end < inner.size() && inner[end] != '"') {
      if (inner[end] == '\\') ++end;
      ++end;
    }
    if (end >= inner.size()) malformed(line, "unterminated string in array");
    out.push_back(parse_quoted(inner.substr(pos, end - pos + 1), line));
    pos = end + 1;
  }
  return out;
}

int parse_int(std::string_view value, int line) {
  const std::string v = trim(value);
  try {
    std::size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) malformed(line, "trailing characters after integer");
    return out;
  } catch (const std::logic_error&) {
    malformed(line, "expected an integer, got '" + v + "'");
  }
}

constexpr auto kRegexFlags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;

}  // namespace

bool RuleSet::declares(std::string_view category) const {
  return std::find(categories.begin(), categories.end(), category) != categories.end();
}

RuleSet load_rules(std::string_view text) {
  RuleSet rs;
  bool saw_taxonomy = false;
  bool in_rule = false;
  Rule current;
  std::vector<Rule> rules;

  const auto finish_rule = [&](int line) {
    if (!in_rule) return;
    if (current.pattern.empty()) malformed(line, "rule is missing a pattern");
    if (current.category.empty()) malformed(line, "rule is missing a category");
    rules.push_back(current);
    current = Rule{};
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line == "[taxonomy]") {
      if (saw_taxonomy) malformed(line_no, "duplicate [taxonomy] section");
      saw_taxonomy = true;
      continue;
    }
    if (line == "[[rule]]") {
      if (!saw_taxonomy) malformed(line_no, "[[rule]] before [taxonomy]");
      finish_rule(line_no);
      in_rule = true;
      current.line = line_no;
      continue;
    }
    if (line.front() == '[') malformed(line_no, "unknown section '" + line + "'");

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) malformed(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (!in_rule) {
      if (!saw_taxonomy) malformed(line_no, "key outside any section");
      if (key == "name") {
        rs.taxonomy_name = parse_quoted(value, line_no);
      } else if (key == "categories") {
        for (std::string& c : parse_string_array(value, line_no)) {
          if (std::find(rs.categories.begin(), rs.categories.end(), c) != rs.categories.end())
            fail(ErrorKind::DuplicateCategory,
                 "category '" + c + "' declared twice (line " + std::to_string(line_no) + ")");
          rs.categories.push_back(std::move(c));
        }
      } else {
        malformed(line_no, "unknown taxonomy key '" + key + "'");
      }
      continue;
    }

    if (key == "pattern") {
      current.pattern = parse_quoted(value, line_no);
    } else if (key == "category") {
      current.category = parse_quoted(value, line_no);
    } else if (key == "priority") {
      current.priority = parse_int(value, line_no);
    } else if (key == "device") {
      const std::string d = parse_quoted(value, line_no);
      if (d == "cpu")
        current.device = DeviceFilter::Cpu;
      else if (d == "gpu")
        current.device = DeviceFilter::Gpu;
      else if (d == "any")
        current.device = DeviceFilter::Any;
      else
        malformed(line_no, "device must be cpu, gpu, or any");
    } else if (key == "shapes") {
      const std::string s = parse_quoted(value, line_no);
      if (s == "has")
        current.shapes = ShapePredicate::HasShapes;
      else if (s == "none")
        current.shapes = ShapePredicate::NoShapes;
      else if (s == "any")
        current.shapes = ShapePredicate::Any;
      else
        malformed(line_no, "shapes must be has, none, or any");
    } else {
      malformed(line_no, "unknown rule key '" + key + "'");
    }
  }
  finish_rule(line_no);

  if (!saw_taxonomy) fail(ErrorKind::MalformedInput, "rule file has no [taxonomy] section");
  if (rs.taxonomy_name.empty()) fail(ErrorKind::MalformedInput, "taxonomy has no name");
  if (rs.categories.empty()) fail(ErrorKind::MalformedInput, "taxonomy declares no categories");
  if (!rs.declares("Other")) rs.categories.emplace_back("Other");

  for (const Rule& r : rules) {
    if (!rs.declares(r.category))
      fail(ErrorKind::UndeclaredCategory,
           "rule at line " + std::to_string(r.line) + " uses undeclared category '" + r.category + "'");
  }

  // Higher priority first; stable sort keeps file order as the tiebreak.
  std::stable_sort(rules.begin(), rules.end(),
                   [](const Rule& a, const Rule& b) { return a.priority > b.priority; });
  rs.rules = std::move(rules);

  rs.compiled.reserve(rs.rules.size());
  for (const Rule& r : rs.rules) {
    try {
      rs.compiled.emplace_back(r.pattern, kRegexFlags);
    } catch (const std::regex_error& e) {
      fail(ErrorKind::BadPattern, "rule at line " + std::to_string(r.line) + ": pattern '" +
                                      r.pattern + "' does not compile: " + e.what());
    }
  }
  return rs;
}

namespace {

bool rule_applies(const Rule& rule, const std::regex& re, const std::string& name,
                  Device device, bool has_shapes) {
  if (rule.device == DeviceFilter::Cpu && device != Device::Cpu) return false;
  if (rule.device == DeviceFilter::Gpu && device != Device::Gpu) return false;
  if (rule.shapes == ShapePredicate::HasShapes && !has_shapes) return false;
  if (rule.shapes == ShapePredicate::NoShapes && has_shapes) return false;
  return std::regex_match(name, re);
}

// Index of the winning rule, or npos when no rule matches.
std::size_t match_index(const RuleSet& rules, const std::string& name, Device device,
                        bool has_shapes) {
  for (std::size_t i = 0; i < rules.rules.size(); ++i)
    if (rule_applies(rules.rules[i], rules.compiled[i], name, device, has_shapes)) return i;
  return static_cast<std::size_t>(-1);
}

}  // namespace

CategoryId classify(const OpRecord& record, const RuleSet& rules) {
  const std::size_t idx =
      match_index(rules, record.name, record.device, record.shapes.has_value());
  if (idx == static_cast<std::size_t>(-1)) return CategoryId{rules.taxonomy_name, "Other"};
  return CategoryId{rules.taxonomy_name, rules.rules[idx].category};
}

UnmatchedReport classify_all(std::vector<OpRecord>& records, const RuleSet& rules) {
  // Traces repeat a small set of op names, so matching is memoized on the
  // full classification key (name, device, shapes-presence).
  struct Cached {
    std::size_t rule = 0;
    bool matched = false;
  };
  std::unordered_map<std::string, Cached> memo;
  std::unordered_map<std::string, UnmatchedEntry> unmatched;

  for (OpRecord& r : records) {
    std::string key = r.name;
    key.push_back('\x1f');
    key.push_back(r.device == Device::Cpu ? 'c' : 'g');
    key.push_back(r.shapes.has_value() ? 's' : '-');

    auto it = memo.find(key);
    if (it == memo.end()) {
      const std::size_t idx = match_index(rules, r.name, r.device, r.shapes.has_value());
      it = memo.emplace(std::move(key), Cached{idx, idx != static_cast<std::size_t>(-1)}).first;
    }
    if (it->second.matched) {
      r.category = CategoryId{rules.taxonomy_name, rules.rules[it->second.rule].category};
    } else {
      r.category = CategoryId{rules.taxonomy_name, "Other"};
      UnmatchedEntry& entry = unmatched[r.name];
      entry.name = r.name;
      entry.self_ns += r.self_ns;
      entry.records += 1;
    }
  }

  UnmatchedReport report;
  report.entries.reserve(unmatched.size());
  for (auto& [_, entry] : unmatched) report.entries.push_back(std::move(entry));
  std::sort(report.entries.begin(), report.entries.end(),
            [](const UnmatchedEntry& a, const UnmatchedEntry& b) {
              if (a.self_ns != b.self_ns) return a.self_ns > b.self_ns;
              return a.name < b.name;
            });
  return report;
}

}  // namespace tracelens
