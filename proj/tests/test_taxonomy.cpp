#include "tracelens/taxonomy.hpp"

#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "tracelens/calltree.hpp"
#include "tracelens/error.hpp"
#include "tracelens/ingest.hpp"

using namespace tracelens;
namespace tt = tracelens::testing;
using tt::rand_int;

namespace {

OpRecord record(std::string name, Device device = Device::Cpu, bool with_shapes = false) {
  OpRecord r;
  r.name = std::move(name);
  r.device = device;
  r.self_ns = 100;
  r.total_ns = 100;
  if (with_shapes) r.shapes = std::vector<Shape>{{4, 4}};
  return r;
}

std::string classify_name(const std::string& name, const RuleSet& rules) {
  return classify(record(name), rules).name;
}

}  // namespace

TEST_CASE("empty rule set classifies everything as Other") {
  const RuleSet rules = load_rules(
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"A\", \"B\", \"C\", \"D\", \"E\", \"F\", \"G\", \"H\", \"Other\"]\n");
  CHECK(rules.categories.size() == 9);
  CHECK(rules.rules.empty());
  CHECK(classify_name("anything", rules) == "Other");
}

TEST_CASE("rules referencing undeclared categories are rejected") {
  try {
    load_rules(
        "[taxonomy]\n"
        "name = \"t\"\n"
        "categories = [\"Convolution\"]\n"
        "[[rule]]\n"
        "pattern = \"conv.*\"\n"
        "category = \"Convolutions\"\n");
    FAIL("expected UndeclaredCategory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndeclaredCategory);
  }
}

TEST_CASE("duplicate category declarations are rejected") {
  try {
    load_rules("[taxonomy]\nname = \"t\"\ncategories = [\"A\", \"A\"]\n");
    FAIL("expected DuplicateCategory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateCategory);
  }
}

TEST_CASE("uncompilable patterns report their position") {
  try {
    load_rules(
        "[taxonomy]\n"
        "name = \"t\"\n"
        "categories = [\"A\"]\n"
        "[[rule]]\n"
        "pattern = \"(unclosed\"\n"
        "category = \"A\"\n");
    FAIL("expected BadPattern");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadPattern);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("the shipped ml8 rule file loads with enough coverage") {
  const RuleSet rules = load_rules(read_file(tt::repo_file("rules/ml8.rules")));
  CHECK(rules.taxonomy_name == "ml8");
  CHECK(rules.rules.size() >= 40);
  REQUIRE(rules.categories.size() == 9);
  CHECK(rules.categories.back() == "Other");

  CHECK(classify_name("aten::mm", rules) == "DenseMM");
  CHECK(classify_name("aten::conv2d", rules) == "Convolution");
  CHECK(classify_name("aten::relu", rules) == "ElementWise");
  CHECK(classify_name("aten::softmax", rules) == "ElementWise");
  CHECK(classify_name("aten::copy_", rules) == "DataMovement");
  CHECK(classify_name("aten::transpose", rules) == "DataTransformation");
  CHECK(classify_name("aten::embedding", rules) == "Embedding");
  CHECK(classify_name("aten::coalesce", rules) == "DataTransformation");
}

TEST_CASE("the built-in rule sets match the shipped files") {
  CHECK(builtin_rules_text("ml8") == read_file(tt::repo_file("rules/ml8.rules")));
  CHECK(builtin_rules_text("symbolic") == read_file(tt::repo_file("rules/symbolic.rules")));
  CHECK(builtin_rule_names() == std::vector<std::string>{"ml8", "symbolic"});
}

TEST_CASE("classification follows the paper-facing examples") {
  const RuleSet rules = builtin_rules("ml8");
  CHECK(classify_name("aten::addmm", rules) == "DenseMM");
  CHECK(classify_name("sparse_coalesce", rules) == "DataTransformation");
  CHECK(classify_name("frobnicate_v2", rules) == "Other");
}

TEST_CASE("matching is anchored: no implicit wildcard wrapping") {
  const RuleSet rules = load_rules(
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"DenseMM\"]\n"
      "[[rule]]\n"
      "pattern = \"mm\"\n"
      "category = \"DenseMM\"\n");
  CHECK(classify_name("mm", rules) == "DenseMM");
  CHECK(classify_name("communication", rules) == "Other");
}

TEST_CASE("matching is case-insensitive") {
  const RuleSet rules = builtin_rules("ml8");
  CHECK(classify_name("ATen::AddMM", rules) == "DenseMM");
  CHECK(classify_name("MEMCPY HtoD", rules) == "DataMovement");
}

TEST_CASE("device filters and shape predicates gate rules") {
  const RuleSet rules = load_rules(
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"GpuOnly\", \"Shaped\"]\n"
      "[[rule]]\n"
      "pattern = \"kernel\"\n"
      "category = \"GpuOnly\"\n"
      "device = \"gpu\"\n"
      "[[rule]]\n"
      "pattern = \"op\"\n"
      "category = \"Shaped\"\n"
      "shapes = \"has\"\n");
  CHECK(classify(record("kernel", Device::Gpu), rules).name == "GpuOnly");
  CHECK(classify(record("kernel", Device::Cpu), rules).name == "Other");
  CHECK(classify(record("op", Device::Cpu, true), rules).name == "Shaped");
  CHECK(classify(record("op", Device::Cpu, false), rules).name == "Other");
}

TEST_CASE("priority wins over file order; file order breaks ties") {
  const RuleSet rules = load_rules(
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"Low\", \"High\", \"First\", \"Second\"]\n"
      "[[rule]]\npattern = \"x\"\ncategory = \"Low\"\npriority = 1\n"
      "[[rule]]\npattern = \"x\"\ncategory = \"High\"\npriority = 9\n"
      "[[rule]]\npattern = \"y\"\ncategory = \"First\"\npriority = 5\n"
      "[[rule]]\npattern = \"y\"\ncategory = \"Second\"\npriority = 5\n");
  CHECK(classify_name("x", rules) == "High");
  CHECK(classify_name("y", rules) == "First");
}

TEST_CASE("classify_all fills every record and reports unmatched names") {
  const RuleSet rules = builtin_rules("ml8");
  std::vector<OpRecord> records;
  records.push_back(record("aten::addmm"));
  records.push_back(record("aten::relu"));
  records.push_back(record("frobnicate"));
  records[2].self_ns = 900;

  const UnmatchedReport report = classify_all(records, rules);
  CHECK(records[0].category->name == "DenseMM");
  CHECK(records[1].category->name == "ElementWise");
  CHECK(records[2].category->name == "Other");
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].name == "frobnicate");
  CHECK(report.entries[0].self_ns == 900);
}

TEST_CASE("unmatched report is sorted by descending total self time") {
  const RuleSet rules = builtin_rules("ml8");
  std::vector<OpRecord> records;
  for (auto [name, self] : std::initializer_list<std::pair<const char*, std::int64_t>>{
           {"small_fry", 10}, {"big_deal", 500}, {"small_fry", 15}, {"middle", 100}}) {
    OpRecord r = record(name);
    r.self_ns = self;
    records.push_back(std::move(r));
  }
  const UnmatchedReport report = classify_all(records, rules);
  REQUIRE(report.entries.size() == 3);
  CHECK(report.entries[0].name == "big_deal");
  CHECK(report.entries[1].name == "middle");
  CHECK(report.entries[2].name == "small_fry");
  CHECK(report.entries[2].self_ns == 25);
  CHECK(report.entries[2].records == 2);
}

TEST_CASE("classify_all on an empty record list is empty") {
  const RuleSet rules = builtin_rules("ml8");
  std::vector<OpRecord> records;
  CHECK(classify_all(records, rules).entries.empty());
}

TEST_CASE("unmatched report counts distinct non-matching names") {
  const RuleSet rules = load_rules(
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"Hit\"]\n"
      "[[rule]]\npattern = \"hit_.*\"\ncategory = \"Hit\"\n");
  tt::Rng rng(31337);
  std::vector<OpRecord> records;
  std::set<std::string> expected_unmatched;
  for (int i = 0; i < 100000; ++i) {
    const bool matches = rand_int(rng, 0, 1) == 0;
    // ~200 distinct names on each side
    std::string name = (matches ? "hit_" : "miss_") + std::to_string(rand_int(rng, 0, 199));
    if (!matches) expected_unmatched.insert(name);
    records.push_back(record(std::move(name)));
  }
  const UnmatchedReport report = classify_all(records, rules);
  CHECK(report.entries.size() == expected_unmatched.size());
  for (const UnmatchedEntry& e : report.entries)
    CHECK(expected_unmatched.count(e.name) == 1);
}

TEST_CASE("classification is deterministic and total") {
  const RuleSet rules = builtin_rules("ml8");
  tt::Rng rng(2222);
  std::vector<OpRecord> records;
  for (int i = 0; i < 2000; ++i)
    records.push_back(record("name_" + std::to_string(rand_int(rng, 0, 500))));
  std::vector<OpRecord> copy = records;

  const UnmatchedReport a = classify_all(records, rules);
  const UnmatchedReport b = classify_all(copy, rules);
  CHECK(records == copy);
  CHECK(a == b);
  for (const OpRecord& r : records) {
    REQUIRE(r.category.has_value());
    CHECK(r.category->taxonomy == "ml8");
  }
}

TEST_CASE("priority dominance: a new top-priority rule changes only its matches") {
  const std::string base =
      "[taxonomy]\n"
      "name = \"t\"\n"
      "categories = [\"A\", \"B\", \"New\"]\n"
      "[[rule]]\npattern = \"a.*\"\ncategory = \"A\"\npriority = 5\n"
      "[[rule]]\npattern = \".*b\"\ncategory = \"B\"\npriority = 3\n";
  const RuleSet before = load_rules(base);

  tt::Rng rng(424242);
  static const char* kAlphabet = "ab_xyz";
  for (int trial = 0; trial < 50; ++trial) {
    std::string fragment;
    for (int i = 0; i < 3; ++i) fragment.push_back(kAlphabet[rand_int(rng, 0, 5)]);
    const int priority = static_cast<int>(rand_int(rng, 0, 10));
    const RuleSet after = load_rules(base + "[[rule]]\npattern = \".*" + fragment +
                                     ".*\"\ncategory = \"New\"\npriority = " +
                                     std::to_string(priority) + "\n");
    for (int i = 0; i < 40; ++i) {
      std::string name;
      for (int c = 0; c < 4; ++c) name.push_back(kAlphabet[rand_int(rng, 0, 5)]);
      const std::string old_cat = classify_name(name, before);
      const std::string new_cat = classify_name(name, after);
      CHECK((new_cat == old_cat || new_cat == "New"));
    }
  }
}
