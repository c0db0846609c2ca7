#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tracelens/calltree.hpp"
#include "tracelens/taxonomy.hpp"

namespace tracelens {

// Per-category self-time aggregate for one model/run. Every category of the
// taxonomy appears (zero-filled); values are exact integer nanoseconds.
struct Breakdown {
  std::string label;
  Taxonomy taxonomy;
  std::vector<std::int64_t> values;  // aligned with taxonomy.categories
  std::int64_t total_ns = 0;

  std::int64_t value_of(std::string_view category) const;

  friend bool operator==(const Breakdown&, const Breakdown&) = default;
};

// Aggregates classified records into a breakdown. Self time is used, never
// total: nested spans would double-count and proportions would no longer
// sum to 1. Errors: MixedTaxonomy for unclassified records or records from
// another taxonomy.
Breakdown aggregate(const std::vector<OpRecord>& records, const Taxonomy& taxonomy,
                    std::string label);

// Entry-wise sum; the exact-integer fold behind parallel aggregation.
Breakdown merge(const Breakdown& a, const Breakdown& b);

// Fractions of total, one per category, summing to 1 within 1e-9.
// Errors: EmptyBreakdown when total is zero.
std::vector<std::pair<std::string, double>> proportions(const Breakdown& b);

// Row-normalized proportions, one row per breakdown (Fig.-5-style matrix).
struct HeatmapMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> cells;  // rows sum to 1, or are all-zero

  friend bool operator==(const HeatmapMatrix&, const HeatmapMatrix&) = default;
};

HeatmapMatrix heatmap(const std::vector<Breakdown>& breakdowns,
                      std::vector<std::string>* warnings = nullptr);

// Human-readable table in the eight-category column order. One unit per row
// (us/ms/s), chosen so the row total is at least 10 in that unit.
// Errors: WrongTaxonomy unless the breakdown uses the ml8 taxonomy.
std::string table_header();
std::string table_row(const Breakdown& b);

// Per-item pipeline cost times an invocation count (e.g. frames per video).
Breakdown scale_to_pipeline(const Breakdown& b, std::int64_t multiplier);

struct CategoryDelta {
  std::string category;
  std::int64_t delta_ns = 0;      // a - b
  double delta_fraction = 0.0;    // fraction in a - fraction in b

  friend bool operator==(const CategoryDelta&, const CategoryDelta&) = default;
};

// Antisymmetric comparison: diff(a, b) == -diff(b, a), exactly for deltas.
std::vector<CategoryDelta> diff(const Breakdown& a, const Breakdown& b);

enum class EmitFormat { Csv, Json, SvgStackedBars };
EmitFormat parse_emit_format(std::string_view name);  // UnsupportedFormat

// Dimensions and colors of the SVG stacked-bar output; an empty palette
// selects the built-in one.
struct SvgStyle {
  int bar_width = 56;
  int plot_height = 320;
  std::vector<std::string> palette;
};

std::string emit_breakdowns(const std::vector<Breakdown>& breakdowns, EmitFormat format,
                            const SvgStyle& style = {});
std::string emit_heatmap(const HeatmapMatrix& matrix, EmitFormat format,
                         const SvgStyle& style = {});

// Exact inverse of emit_heatmap(..., Csv): cell values round-trip bit-for-bit.
HeatmapMatrix parse_heatmap_csv(std::string_view bytes);

// Dominant category of a breakdown. "Other" is a catch-all, not an
// operation class, so it is excluded unless include_other is set.
std::string dominant_category(const Breakdown& b, bool include_other = false);

// One duration with a value-scaled unit (largest of s/ms/us/ns keeping the
// value >= 1), three significant figures.
std::string format_duration(std::int64_t ns);

}  // namespace tracelens
