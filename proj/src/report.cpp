#include "tracelens/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tracelens/error.hpp"
#include "tracelens/rational.hpp"

namespace tracelens {

using json = nlohmann::json;

std::int64_t Breakdown::value_of(std::string_view category) const {
  for (std::size_t i = 0; i < taxonomy.categories.size(); ++i)
    if (taxonomy.categories[i] == category) return values[i];
  fail(ErrorKind::BadArgument,
       "category '" + std::string(category) + "' is not in taxonomy '" + taxonomy.name + "'");
}

Breakdown aggregate(const std::vector<OpRecord>& records, const Taxonomy& taxonomy,
                    std::string label) {
  Breakdown b;
  b.label = std::move(label);
  b.taxonomy = taxonomy;
  b.values.assign(taxonomy.categories.size(), 0);

  for (const OpRecord& r : records) {
    if (!r.category)
      fail(ErrorKind::MixedTaxonomy, "record '" + r.name + "' is not classified");
    if (r.category->taxonomy != taxonomy.name)
      fail(ErrorKind::MixedTaxonomy, "record '" + r.name + "' was classified under taxonomy '" +
                                         r.category->taxonomy + "', expected '" + taxonomy.name +
                                         "'");
    const auto it =
        std::find(taxonomy.categories.begin(), taxonomy.categories.end(), r.category->name);
    if (it == taxonomy.categories.end())
      fail(ErrorKind::MixedTaxonomy,
           "record '" + r.name + "' has unknown category '" + r.category->name + "'");
    const std::size_t idx = static_cast<std::size_t>(it - taxonomy.categories.begin());
    b.values[idx] = checked_add(b.values[idx], r.self_ns, "category total");
    b.total_ns = checked_add(b.total_ns, r.self_ns, "breakdown total");
  }
  return b;
}

Breakdown merge(const Breakdown& a, const Breakdown& b) {
  if (a.taxonomy != b.taxonomy)
    fail(ErrorKind::MixedTaxonomy,
         "cannot merge breakdowns from taxonomies '" + a.taxonomy.name + "' and '" +
             b.taxonomy.name + "'");
  Breakdown out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = checked_add(out.values[i], b.values[i], "category total");
  out.total_ns = checked_add(out.total_ns, b.total_ns, "breakdown total");
  return out;
}

std::vector<std::pair<std::string, double>> proportions(const Breakdown& b) {
  if (b.total_ns == 0)
    fail(ErrorKind::EmptyBreakdown, "breakdown '" + b.label + "' has zero total time");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(b.values.size());
  for (std::size_t i = 0; i < b.values.size(); ++i)
    out.emplace_back(b.taxonomy.categories[i],
                     static_cast<double>(b.values[i]) / static_cast<double>(b.total_ns));
  return out;
}

HeatmapMatrix heatmap(const std::vector<Breakdown>& breakdowns,
                      std::vector<std::string>* warnings) {
  HeatmapMatrix m;
  if (breakdowns.empty()) return m;
  const Taxonomy& taxonomy = breakdowns.front().taxonomy;
  m.column_labels = taxonomy.categories;
  for (const Breakdown& b : breakdowns) {
    if (b.taxonomy != taxonomy)
      fail(ErrorKind::MixedTaxonomy, "breakdown '" + b.label + "' uses taxonomy '" +
                                         b.taxonomy.name + "', expected '" + taxonomy.name + "'");
    m.row_labels.push_back(b.label);
    std::vector<double> row(b.values.size(), 0.0);
    if (b.total_ns == 0) {
      if (warnings)
        warnings->push_back("breakdown '" + b.label + "' is empty; emitting an all-zero row");
    } else {
      for (std::size_t i = 0; i < b.values.size(); ++i)
        row[i] = static_cast<double>(b.values[i]) / static_cast<double>(b.total_ns);
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

namespace {

struct DisplayColumn {
  const char* category;
  const char* heading;
};

// Presentation order and headings of the eight-category table.
constexpr DisplayColumn kTableColumns[] = {
    {"DenseMM", "GEMM"},           {"SparseMM", "Sparse MM"},
    {"Convolution", "Conv"},       {"ElementWise", "Element-Wise"},
    {"Regional", "Regional"},      {"Embedding", "Embedding"},
    {"DataMovement", "Data Move"}, {"DataTransformation", "Data Transform"},
    {"Other", "Other"},
};

constexpr int kLabelWidth = 20;
constexpr int kCellWidth = 15;

struct RowUnit {
  const char* suffix;
  double ns;
};

// One unit per row: the largest of s/ms/us in which the row total is at
// least 10 (so 7853 ms stays "7853ms" rather than "7.853s").
RowUnit pick_row_unit(std::int64_t total_ns) {
  constexpr RowUnit units[] = {{"s", 1e9}, {"ms", 1e6}, {"us", 1e3}};
  for (const RowUnit& u : units)
    if (static_cast<double>(total_ns) / u.ns >= 10.0) return u;
  return units[2];
}

std::string format_cell(std::int64_t ns, const RowUnit& unit) {
  if (ns == 0) return std::string("0") + unit.suffix;
  const double v = static_cast<double>(ns) / unit.ns;
  char buf[64];
  if (v < 1.0)
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  else if (v < 1000.0)
    std::snprintf(buf, sizeof(buf), "%.1f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  return std::string(buf) + unit.suffix;
}

void append_padded(std::string& out, const std::string& cell, int width, bool right) {
  const int pad = width > static_cast<int>(cell.size())
                      ? width - static_cast<int>(cell.size())
                      : 1;
  if (right) out.append(pad, ' ');
  out += cell;
  if (!right) out.append(pad, ' ');
}

}  // namespace

std::string table_header() {
  std::string out;
  append_padded(out, "Model", kLabelWidth, false);
  for (const DisplayColumn& col : kTableColumns) append_padded(out, col.heading, kCellWidth, true);
  append_padded(out, "Total", kCellWidth, true);
  return out;
}

std::string table_row(const Breakdown& b) {
  if (b.taxonomy.name != "ml8")
    fail(ErrorKind::WrongTaxonomy, "the runtime table renders the ml8 taxonomy, got '" +
                                       b.taxonomy.name + "'");
  const RowUnit unit = pick_row_unit(b.total_ns);
  std::string out;
  append_padded(out, b.label, kLabelWidth, false);
  for (const DisplayColumn& col : kTableColumns)
    append_padded(out, format_cell(b.value_of(col.category), unit), kCellWidth, true);
  append_padded(out, format_cell(b.total_ns, unit), kCellWidth, true);
  return out;
}

Breakdown scale_to_pipeline(const Breakdown& b, std::int64_t multiplier) {
  if (multiplier < 1) fail(ErrorKind::BadArgument, "pipeline multiplier must be >= 1");
  Breakdown out = b;
  for (std::int64_t& v : out.values) v = checked_mul(v, multiplier, "scaled category total");
  out.total_ns = checked_mul(out.total_ns, multiplier, "scaled breakdown total");
  return out;
}

std::vector<CategoryDelta> diff(const Breakdown& a, const Breakdown& b) {
  if (a.taxonomy != b.taxonomy)
    fail(ErrorKind::MixedTaxonomy, "cannot diff breakdowns from different taxonomies");
  std::vector<CategoryDelta> out;
  out.reserve(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CategoryDelta d;
    d.category = a.taxonomy.categories[i];
    d.delta_ns = a.values[i] - b.values[i];
    const double fa =
        a.total_ns == 0 ? 0.0 : static_cast<double>(a.values[i]) / static_cast<double>(a.total_ns);
    const double fb =
        b.total_ns == 0 ? 0.0 : static_cast<double>(b.values[i]) / static_cast<double>(b.total_ns);
    d.delta_fraction = fa - fb;
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV / JSON / SVG emission
// ---------------------------------------------------------------------------

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string double_to_string(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Minimal RFC-4180 reader: returns rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view bytes) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char c = bytes[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',': row.push_back(std::move(field)); field.clear(); any = true; break;
      case '\r': break;
      case '\n':
        if (any || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          field.clear();
          rows.push_back(std::move(row));
          row.clear();
          any = false;
        }
        break;
      default: field.push_back(c); any = true; break;
    }
  }
  if (any || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

constexpr const char* kPalette[] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
};

std::string svg_color(const SvgStyle& style, std::size_t segment) {
  if (!style.palette.empty()) return style.palette[segment % style.palette.size()];
  return kPalette[segment % std::size(kPalette)];
}

std::string svg_stacked_bars(const std::vector<std::string>& labels,
                             const std::vector<std::string>& categories,
                             const std::vector<std::vector<double>>& heights,
                             const std::string& value_caption, const SvgStyle& style) {
  // heights are per-bar segment fractions of the tallest bar, in [0, 1].
  const int kBarWidth = style.bar_width;
  const int kBarGap = kBarWidth / 2;
  const int kPlotHeight = style.plot_height;
  constexpr int kMargin = 48;
  constexpr int kLegendWidth = 190;
  const int plot_width =
      kMargin * 2 + static_cast<int>(labels.size()) * (kBarWidth + kBarGap);
  const int width = plot_width + kLegendWidth;
  const int height = kPlotHeight + kMargin * 2 + 40;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << value_caption << "</text>\n";

  for (std::size_t bar = 0; bar < labels.size(); ++bar) {
    const int x = kMargin + static_cast<int>(bar) * (kBarWidth + kBarGap);
    double y = kMargin + kPlotHeight;
    for (std::size_t seg = 0; seg < categories.size(); ++seg) {
      const double h = heights[bar][seg] * kPlotHeight;
      if (h <= 0.0) continue;
      y -= h;
      svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kBarWidth
          << "\" height=\"" << h << "\" fill=\"" << svg_color(style, seg)
          << "\"><title>" << labels[bar] << ": " << categories[seg] << "</title></rect>\n";
    }
    svg << "  <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << kMargin + kPlotHeight + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << labels[bar] << "</text>\n";
  }

  const int lx = plot_width;
  for (std::size_t seg = 0; seg < categories.size(); ++seg) {
    const int ly = kMargin + static_cast<int>(seg) * 20;
    svg << "  <rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
        << svg_color(style, seg) << "\"/>\n";
    svg << "  <text x=\"" << lx + 18 << "\" y=\"" << ly + 10
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << categories[seg] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

EmitFormat parse_emit_format(std::string_view name) {
  if (name == "csv") return EmitFormat::Csv;
  if (name == "json") return EmitFormat::Json;
  if (name == "svg") return EmitFormat::SvgStackedBars;
  fail(ErrorKind::UnsupportedFormat, "unsupported output format '" + std::string(name) + "'");
}

std::string emit_breakdowns(const std::vector<Breakdown>& breakdowns, EmitFormat format,
                            const SvgStyle& style) {
  if (!breakdowns.empty()) {
    const Taxonomy& taxonomy = breakdowns.front().taxonomy;
    for (const Breakdown& b : breakdowns)
      if (b.taxonomy != taxonomy)
        fail(ErrorKind::MixedTaxonomy, "breakdowns use different taxonomies");
  }

  switch (format) {
    case EmitFormat::Csv: {
      std::string out = "label";
      const std::vector<std::string> categories =
          breakdowns.empty() ? std::vector<std::string>{} : breakdowns.front().taxonomy.categories;
      for (const std::string& c : categories) out += "," + csv_quote(c);
      out += ",total_ns\n";
      for (const Breakdown& b : breakdowns) {
        out += csv_quote(b.label);
        for (std::int64_t v : b.values) out += "," + std::to_string(v);
        out += "," + std::to_string(b.total_ns) + "\n";
      }
      return out;
    }
    case EmitFormat::Json: {
      json doc;
      doc["taxonomy"] = breakdowns.empty() ? "" : breakdowns.front().taxonomy.name;
      doc["breakdowns"] = json::array();
      for (const Breakdown& b : breakdowns) {
        json entry;
        entry["label"] = b.label;
        entry["total_ns"] = b.total_ns;
        json values;
        for (std::size_t i = 0; i < b.values.size(); ++i)
          values[b.taxonomy.categories[i]] = b.values[i];
        entry["entries"] = std::move(values);
        doc["breakdowns"].push_back(std::move(entry));
      }
      return doc.dump(1) + "\n";
    }
    case EmitFormat::SvgStackedBars: {
      std::vector<std::string> labels;
      std::vector<std::vector<double>> heights;
      std::int64_t max_total = 1;
      for (const Breakdown& b : breakdowns) max_total = std::max(max_total, b.total_ns);
      for (const Breakdown& b : breakdowns) {
        labels.push_back(b.label);
        std::vector<double> segs;
        for (std::int64_t v : b.values)
          segs.push_back(static_cast<double>(v) / static_cast<double>(max_total));
        heights.push_back(std::move(segs));
      }
      const std::vector<std::string> categories =
          breakdowns.empty() ? std::vector<std::string>{} : breakdowns.front().taxonomy.categories;
      return svg_stacked_bars(labels, categories, heights,
                              "Runtime breakdown (tallest bar = " +
                                  (breakdowns.empty() ? std::string("0")
                                                      : format_duration(max_total)) +
                                  ")",
                              style);
    }
  }
  fail(ErrorKind::UnsupportedFormat, "unhandled emit format");
}

std::string emit_heatmap(const HeatmapMatrix& m, EmitFormat format, const SvgStyle& style) {
  switch (format) {
    case EmitFormat::Csv: {
      std::string out = "label";
      for (const std::string& c : m.column_labels) out += "," + csv_quote(c);
      out += "\n";
      for (std::size_t r = 0; r < m.row_labels.size(); ++r) {
        out += csv_quote(m.row_labels[r]);
        for (double v : m.cells[r]) out += "," + double_to_string(v);
        out += "\n";
      }
      return out;
    }
    case EmitFormat::Json: {
      json doc;
      doc["row_labels"] = m.row_labels;
      doc["column_labels"] = m.column_labels;
      doc["cells"] = m.cells;
      return doc.dump(1) + "\n";
    }
    case EmitFormat::SvgStackedBars: {
      return svg_stacked_bars(m.row_labels, m.column_labels, m.cells,
                              "Proportion of runtime per category", style);
    }
  }
  fail(ErrorKind::UnsupportedFormat, "unhandled emit format");
}

HeatmapMatrix parse_heatmap_csv(std::string_view bytes) {
  const auto rows = parse_csv(bytes);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "label")
    fail(ErrorKind::MalformedInput, "heatmap CSV must start with a 'label' header");
  HeatmapMatrix m;
  m.column_labels.assign(rows.front().begin() + 1, rows.front().end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows.front().size())
      fail(ErrorKind::MalformedInput,
           "heatmap CSV row " + std::to_string(r) + " has the wrong number of fields");
    m.row_labels.push_back(row.front());
    std::vector<double> cells;
    for (std::size_t c = 1; c < row.size(); ++c) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(row[c].data(), row[c].data() + row[c].size(), v);
      if (ec != std::errc() || ptr != row[c].data() + row[c].size())
        fail(ErrorKind::MalformedInput, "bad number '" + row[c] + "' in heatmap CSV");
      cells.push_back(v);
    }
    m.cells.push_back(std::move(cells));
  }
  return m;
}

std::string dominant_category(const Breakdown& b, bool include_other) {
  std::string best;
  std::int64_t best_value = -1;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    const std::string& cat = b.taxonomy.categories[i];
    if (!include_other && cat == "Other") continue;
    if (b.values[i] > best_value) {
      best_value = b.values[i];
      best = cat;
    }
  }
  if (best.empty()) fail(ErrorKind::BadArgument, "taxonomy has no rankable categories");
  return best;
}

std::string format_duration(std::int64_t ns) {
  const bool negative = ns < 0;
  const double mag = std::abs(static_cast<double>(ns));
  struct Unit {
    const char* suffix;
    double ns;
  };
  constexpr Unit units[] = {{"s", 1e9}, {"ms", 1e6}, {"us", 1e3}, {"ns", 1.0}};
  const Unit* chosen = &units[3];
  for (const Unit& u : units)
    if (mag / u.ns >= 1.0) {
      chosen = &u;
      break;
    }
  const double v = mag / chosen->ns;
  char buf[64];
  if (v >= 100.0)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else if (v >= 10.0)
    std::snprintf(buf, sizeof(buf), "%.1f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return (negative ? "-" : "") + s + chosen->suffix;
}

}  // namespace tracelens
