// Python bindings for the core operations: ingest, call-tree flattening,
// classification, aggregation, intensity, and compensation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracelens/calltree.hpp"
#include "tracelens/compensate.hpp"
#include "tracelens/error.hpp"
#include "tracelens/ingest.hpp"
#include "tracelens/intensity.hpp"
#include "tracelens/report.hpp"
#include "tracelens/taxonomy.hpp"
#include "tracelens/trace.hpp"

namespace py = pybind11;
using namespace tracelens;

namespace {

IngestOptions make_options(bool strict) {
  IngestOptions options;
  options.strict = strict;
  return options;
}

// build_forest + compute_self_times + flatten (or the flat-profile path).
std::vector<OpRecord> flatten_trace(const TraceSet& set, bool clip) {
  if (set.source_format == SourceFormat::FlatProfile) return flatten_flat(set);
  BuildOptions options;
  options.clip_partial_overlap = clip;
  Forest forest = build_forest(set, options);
  compute_self_times(forest);
  return flatten(forest);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Profiler-trace analysis: call trees, workload taxonomy, roofline estimates";

  py::register_exception<Error>(m, "TraceError");

  py::enum_<Device>(m, "Device")
      .value("Cpu", Device::Cpu)
      .value("Gpu", Device::Gpu);

  py::enum_<SourceFormat>(m, "SourceFormat")
      .value("ChromeSpans", SourceFormat::ChromeSpans)
      .value("FlatProfile", SourceFormat::FlatProfile)
      .value("Canonical", SourceFormat::Canonical);

  py::enum_<Boundedness>(m, "Boundedness")
      .value("MemoryBound", Boundedness::MemoryBound)
      .value("ComputeBound", Boundedness::ComputeBound)
      .value("Balanced", Boundedness::Balanced);

  py::class_<TraceEvent>(m, "TraceEvent")
      .def(py::init<>())
      .def_readwrite("name", &TraceEvent::name)
      .def_readwrite("lane_id", &TraceEvent::lane_id)
      .def_readwrite("device", &TraceEvent::device)
      .def_readwrite("start_ns", &TraceEvent::start_ns)
      .def_readwrite("duration_ns", &TraceEvent::duration_ns)
      .def_readwrite("call_count", &TraceEvent::call_count)
      .def_readwrite("shapes", &TraceEvent::shapes)
      .def_readwrite("bytes_moved", &TraceEvent::bytes_moved)
      .def_readwrite("self_ns", &TraceEvent::self_ns)
      .def_readwrite("profiler_internal", &TraceEvent::profiler_internal)
      .def("__eq__", [](const TraceEvent& a, const TraceEvent& b) { return a == b; })
      .def("__repr__", [](const TraceEvent& e) {
        return "<TraceEvent '" + e.name + "' " + std::to_string(e.duration_ns) + " ns>";
      });

  py::class_<TraceSet>(m, "TraceSet")
      .def(py::init<>())
      .def_readwrite("label", &TraceSet::label)
      .def_readwrite("wall_time_ns", &TraceSet::wall_time_ns)
      .def_readwrite("source_format", &TraceSet::source_format)
      .def_readwrite("events", &TraceSet::events)
      .def("__eq__", [](const TraceSet& a, const TraceSet& b) { return a == b; })
      .def("__len__", [](const TraceSet& s) { return s.events.size(); });

  py::class_<Violation>(m, "Violation")
      .def_readonly("event_index", &Violation::event_index)
      .def_readonly("field", &Violation::field)
      .def_readonly("message", &Violation::message)
      .def("__repr__", [](const Violation& v) {
        return "<Violation " + v.field + ": " + v.message + ">";
      });

  py::class_<CategoryId>(m, "CategoryId")
      .def_readonly("taxonomy", &CategoryId::taxonomy)
      .def_readonly("name", &CategoryId::name)
      .def("__eq__", [](const CategoryId& a, const CategoryId& b) { return a == b; })
      .def("__repr__",
           [](const CategoryId& c) { return "<" + c.taxonomy + ":" + c.name + ">"; });

  py::class_<Taxonomy>(m, "Taxonomy")
      .def_readonly("name", &Taxonomy::name)
      .def_readonly("categories", &Taxonomy::categories);

  py::class_<RuleSet>(m, "RuleSet")
      .def_readonly("taxonomy_name", &RuleSet::taxonomy_name)
      .def_readonly("categories", &RuleSet::categories)
      .def_property_readonly("rule_count", [](const RuleSet& r) { return r.rules.size(); })
      .def("taxonomy", &RuleSet::taxonomy);

  py::class_<OpRecord>(m, "OpRecord")
      .def(py::init<>())
      .def_readwrite("name", &OpRecord::name)
      .def_readwrite("device", &OpRecord::device)
      .def_readwrite("lane_id", &OpRecord::lane_id)
      .def_readwrite("self_ns", &OpRecord::self_ns)
      .def_readwrite("total_ns", &OpRecord::total_ns)
      .def_readwrite("call_count", &OpRecord::call_count)
      .def_readwrite("shapes", &OpRecord::shapes)
      .def_readwrite("category", &OpRecord::category)
      .def_readwrite("raw_self_ns", &OpRecord::raw_self_ns)
      .def_readwrite("raw_total_ns", &OpRecord::raw_total_ns)
      .def("__repr__", [](const OpRecord& r) {
        return "<OpRecord '" + r.name + "' self " + std::to_string(r.self_ns) + " ns>";
      });

  py::class_<UnmatchedEntry>(m, "UnmatchedEntry")
      .def_readonly("name", &UnmatchedEntry::name)
      .def_readonly("self_ns", &UnmatchedEntry::self_ns)
      .def_readonly("records", &UnmatchedEntry::records);

  py::class_<UnmatchedReport>(m, "UnmatchedReport")
      .def_readonly("entries", &UnmatchedReport::entries)
      .def("__len__", [](const UnmatchedReport& r) { return r.entries.size(); });

  py::class_<Breakdown>(m, "Breakdown")
      .def_readonly("label", &Breakdown::label)
      .def_readonly("taxonomy", &Breakdown::taxonomy)
      .def_readonly("values", &Breakdown::values)
      .def_readonly("total_ns", &Breakdown::total_ns)
      .def("value_of", &Breakdown::value_of)
      .def("__repr__", [](const Breakdown& b) {
        return "<Breakdown '" + b.label + "' total " + std::to_string(b.total_ns) + " ns>";
      });

  py::class_<HeatmapMatrix>(m, "HeatmapMatrix")
      .def_readonly("row_labels", &HeatmapMatrix::row_labels)
      .def_readonly("column_labels", &HeatmapMatrix::column_labels)
      .def_readonly("cells", &HeatmapMatrix::cells)
      .def("__eq__",
           [](const HeatmapMatrix& a, const HeatmapMatrix& b) { return a == b; });

  py::class_<CategoryDelta>(m, "CategoryDelta")
      .def_readonly("category", &CategoryDelta::category)
      .def_readonly("delta_ns", &CategoryDelta::delta_ns)
      .def_readonly("delta_fraction", &CategoryDelta::delta_fraction);

  py::class_<Rational>(m, "Rational")
      .def_readonly("num", &Rational::num)
      .def_readonly("den", &Rational::den)
      .def("__float__", &Rational::value)
      .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; })
      .def("__repr__", [](const Rational& r) { return "<Rational " + r.str() + ">"; });

  py::class_<GemmDims>(m, "GemmDims")
      .def(py::init([](std::int64_t m_, std::int64_t k, std::int64_t n) {
             return GemmDims{m_, k, n};
           }),
           py::arg("m"), py::arg("k"), py::arg("n"))
      .def_readwrite("m", &GemmDims::m)
      .def_readwrite("k", &GemmDims::k)
      .def_readwrite("n", &GemmDims::n);

  py::class_<IntensityEstimate>(m, "IntensityEstimate")
      .def_readonly("work_flops", &IntensityEstimate::work_flops)
      .def_readonly("traffic_bytes", &IntensityEstimate::traffic_bytes)
      .def_readonly("intensity", &IntensityEstimate::intensity)
      .def_readonly("tall_skinny", &IntensityEstimate::tall_skinny);

  py::class_<MachineModel>(m, "MachineModel")
      .def(py::init([](double flops, double bytes) {
             return MachineModel{flops, bytes};
           }),
           py::arg("peak_flops_per_s"), py::arg("peak_bytes_per_s"))
      .def_static("from_balance", &MachineModel::from_balance)
      .def_readwrite("peak_flops_per_s", &MachineModel::peak_flops_per_s)
      .def_readwrite("peak_bytes_per_s", &MachineModel::peak_bytes_per_s)
      .def("balance", &MachineModel::balance);

  py::class_<CompensationModel>(m, "CompensationModel")
      .def_readonly("baseline_wall_ns", &CompensationModel::baseline_wall_ns)
      .def_readonly("profiled_wall_ns", &CompensationModel::profiled_wall_ns)
      .def_readonly("scale", &CompensationModel::scale)
      .def_readonly("flagged", &CompensationModel::flagged);

  // --- trace model and ingest ---
  m.def("validate", &validate, py::arg("set"));
  m.def(
      "parse_span_trace",
      [](const py::bytes& data, const std::string& label, bool strict) {
        return parse_span_trace(std::string(data), label, make_options(strict));
      },
      py::arg("data"), py::arg("label"), py::arg("strict") = false);
  m.def(
      "parse_flat_profile",
      [](const py::bytes& data, const std::string& label, bool strict) {
        return parse_flat_profile(std::string(data), label, make_options(strict));
      },
      py::arg("data"), py::arg("label"), py::arg("strict") = false);
  m.def(
      "parse_canonical",
      [](const py::bytes& data, bool strict) {
        return parse_canonical(std::string(data), make_options(strict));
      },
      py::arg("data"), py::arg("strict") = false);
  m.def("emit_canonical", &emit_canonical, py::arg("set"));
  m.def(
      "read_trace",
      [](const std::string& path, const std::string& format, const std::string& label,
         bool strict) { return read_trace(path, format, label, make_options(strict)); },
      py::arg("path"), py::arg("format") = "auto", py::arg("label") = "",
      py::arg("strict") = false);
  m.def("parse_duration", &parse_duration, py::arg("text"));

  // --- call tree ---
  m.def("flatten_trace", &flatten_trace, py::arg("set"), py::arg("clip") = false,
        "Build per-lane call trees, attribute self time, and flatten to records.");

  // --- taxonomy ---
  m.def("load_rules", [](const std::string& text) { return load_rules(text); },
        py::arg("text"));
  m.def("builtin_rules", [](const std::string& name) { return builtin_rules(name); },
        py::arg("name"));
  m.def("builtin_rules_text",
        [](const std::string& name) { return std::string(builtin_rules_text(name)); },
        py::arg("name"));
  m.def("builtin_rule_names", &builtin_rule_names);
  m.def("classify", &classify, py::arg("record"), py::arg("rules"));
  m.def(
      "classify_all",
      [](std::vector<OpRecord> records, const RuleSet& rules) {
        UnmatchedReport report = classify_all(records, rules);
        return py::make_tuple(std::move(records), std::move(report));
      },
      py::arg("records"), py::arg("rules"),
      "Returns (classified records, unmatched report).");

  // --- reporting ---
  m.def("aggregate", &aggregate, py::arg("records"), py::arg("taxonomy"), py::arg("label"));
  m.def("merge", &merge, py::arg("a"), py::arg("b"));
  m.def("proportions", &proportions, py::arg("breakdown"));
  m.def(
      "heatmap",
      [](const std::vector<Breakdown>& breakdowns) { return heatmap(breakdowns); },
      py::arg("breakdowns"));
  m.def("table_header", &table_header);
  m.def("table_row", &table_row, py::arg("breakdown"));
  m.def("scale_to_pipeline", &scale_to_pipeline, py::arg("breakdown"), py::arg("multiplier"));
  m.def("diff", &diff, py::arg("a"), py::arg("b"));
  m.def(
      "emit_breakdowns",
      [](const std::vector<Breakdown>& breakdowns, const std::string& format) {
        return emit_breakdowns(breakdowns, parse_emit_format(format));
      },
      py::arg("breakdowns"), py::arg("format") = "csv");
  m.def(
      "emit_heatmap",
      [](const HeatmapMatrix& matrix, const std::string& format) {
        return emit_heatmap(matrix, parse_emit_format(format));
      },
      py::arg("matrix"), py::arg("format") = "csv");
  m.def("parse_heatmap_csv",
        [](const std::string& text) { return parse_heatmap_csv(text); }, py::arg("text"));
  m.def("dominant_category", &dominant_category, py::arg("breakdown"),
        py::arg("include_other") = false);
  m.def("format_duration", &format_duration, py::arg("ns"));

  // --- intensity ---
  m.def("gemm_work", &gemm_work, py::arg("dims"));
  m.def("gemm_traffic", &gemm_traffic, py::arg("dims"),
        py::arg("bytes_per_element") = kDefaultBytesPerElement);
  m.def("gemm_intensity", &gemm_intensity, py::arg("dims"),
        py::arg("bytes_per_element") = kDefaultBytesPerElement,
        py::arg("tall_skinny_ratio") = kDefaultTallSkinnyRatio);
  m.def("is_tall_skinny", &is_tall_skinny, py::arg("dims"),
        py::arg("ratio_threshold") = kDefaultTallSkinnyRatio);
  m.def("boundedness", &boundedness, py::arg("estimate"), py::arg("machine"),
        py::arg("epsilon") = 0.05);
  m.def("estimate_record", &estimate_record, py::arg("record"),
        py::arg("bytes_per_element") = kDefaultBytesPerElement,
        py::arg("ops_per_element") = 1);

  // --- compensation ---
  m.def("derive", &derive, py::arg("baseline_wall_ns"), py::arg("profiled_wall_ns"));
  m.def("apply", &tracelens::apply, py::arg("records"), py::arg("model"));
  m.def("strip_profiler_artifacts", &strip_profiler_artifacts, py::arg("records"),
        py::arg("prefixes"));

  m.attr("__version__") = "0.1.0";
}
