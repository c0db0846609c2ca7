#pragma once

#include <cstdint>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace tracelens {

struct OpRecord;

// A category within a named taxonomy. Every taxonomy implicitly contains
// "Other"; records matched by no rule land there.
struct CategoryId {
  std::string taxonomy;
  std::string name;

  friend bool operator==(const CategoryId&, const CategoryId&) = default;
};

struct Taxonomy {
  std::string name;
  std::vector<std::string> categories;  // declaration order, "Other" last unless declared

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;
};

enum class DeviceFilter { Any, Cpu, Gpu };
enum class ShapePredicate { Any, HasShapes, NoShapes };

// One pattern -> category mapping. Patterns are case-insensitive regular
// expressions matched against the FULL op name; there is no implicit ".*"
// wrapping, so "mm" does not match "communication".
struct Rule {
  std::string pattern;
  std::string category;
  int priority = 0;  // higher wins; file order breaks ties
  DeviceFilter device = DeviceFilter::Any;
  ShapePredicate shapes = ShapePredicate::Any;
  int line = 0;  // rule-file line, for diagnostics
};

// A validated, priority-ordered rule set defining one taxonomy.
// Immutable after load; classification is safe from any number of threads.
struct RuleSet {
  std::string taxonomy_name;
  std::vector<std::string> categories;  // includes "Other"
  std::vector<Rule> rules;              // sorted by (priority desc, file order)
  std::vector<std::regex> compiled;     // parallel to rules

  Taxonomy taxonomy() const { return Taxonomy{taxonomy_name, categories}; }
  bool declares(std::string_view category) const;
};

// Parses the rule-file syntax (see rules/ml8.rules for the format).
// Errors: BadPattern, UndeclaredCategory, DuplicateCategory, MalformedInput.
RuleSet load_rules(std::string_view text);

// Built-in rule sets compiled into the library: "ml8" and "symbolic".
RuleSet builtin_rules(std::string_view name);
std::string_view builtin_rules_text(std::string_view name);
std::vector<std::string> builtin_rule_names();

// Category of the highest-priority matching rule; "Other" when none match.
// Pure function of (name, device, shapes-presence, rules).
CategoryId classify(const OpRecord& record, const RuleSet& rules);

struct UnmatchedEntry {
  std::string name;
  std::int64_t self_ns = 0;   // summed over records with this name
  std::int64_t records = 0;

  friend bool operator==(const UnmatchedEntry&, const UnmatchedEntry&) = default;
};

// Distinct names that matched no rule, sorted by descending total self time.
struct UnmatchedReport {
  std::vector<UnmatchedEntry> entries;

  friend bool operator==(const UnmatchedReport&, const UnmatchedReport&) = default;
};

// Classifies every record in place. Deterministic; unmatched names are
// reported, never an error.
UnmatchedReport classify_all(std::vector<OpRecord>& records, const RuleSet& rules);

}  // namespace tracelens
