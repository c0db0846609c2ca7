// tracelens: reconstructs call trees from profiler traces, attributes
// self/total time, classifies operations into a workload taxonomy, and
// emits runtime-breakdown reports. Data goes to stdout (or -o), all
// diagnostics to stderr.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tracelens/calltree.hpp"
#include "tracelens/compensate.hpp"
#include "tracelens/error.hpp"
#include "tracelens/ingest.hpp"
#include "tracelens/intensity.hpp"
#include "tracelens/report.hpp"
#include "tracelens/taxonomy.hpp"
#include "tracelens/trace.hpp"

namespace tl = tracelens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitUsage = 64;

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string rules_source;
  std::string emit = "csv";
  std::string output = "-";
  std::string baseline_wall;
  std::string profiled_wall;
  std::int64_t multiplier = 1;
  bool strict = false;
  bool clip = false;
  bool raw = false;
  bool per_device = false;
  bool keep_profiler_events = false;
  std::vector<std::string> profiler_prefixes = tl::IngestOptions{}.profiler_prefixes;
  int svg_bar_width = 56;
  int svg_height = 320;
  std::string svg_colors;
};

tl::SvgStyle svg_style(const CommonOptions& opt) {
  tl::SvgStyle style;
  style.bar_width = opt.svg_bar_width;
  style.plot_height = opt.svg_height;
  if (!opt.svg_colors.empty()) {
    std::stringstream ss(opt.svg_colors);
    std::string color;
    while (std::getline(ss, color, ',')) style.palette.push_back(color);
  }
  return style;
}

void write_output(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) tl::fail(tl::ErrorKind::MalformedInput, "cannot write '" + path + "'");
  out << data;
}

tl::RuleSet resolve_rules(const std::string& source) {
  std::string src = source;
  if (src.empty()) {
    const char* env = std::getenv("TRACELENS_RULES");
    src = env ? env : "builtin:ml8";
  }
  if (src.rfind("builtin:", 0) == 0) return tl::builtin_rules(src.substr(8));
  return tl::load_rules(tl::read_file(src));
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct LoadedTrace {
  tl::TraceSet set;
  std::vector<tl::OpRecord> records;
};

// Shared ingest -> call-tree -> compensate -> classify pipeline.
LoadedTrace load_and_flatten(const std::string& path, const CommonOptions& opt) {
  tl::IngestOptions ingest;
  ingest.strict = opt.strict;
  ingest.profiler_prefixes = opt.profiler_prefixes;
  std::vector<std::string> warnings;

  LoadedTrace out;
  out.set = tl::read_trace(path, opt.format, "", ingest, &warnings);
  print_warnings(warnings);

  const std::vector<tl::Violation> violations = tl::validate(out.set);
  if (!violations.empty()) {
    for (const tl::Violation& v : violations) {
      std::cerr << "invalid trace '" << out.set.label << "'";
      if (v.event_index) std::cerr << " event " << *v.event_index;
      std::cerr << " [" << v.field << "]: " << v.message << "\n";
    }
    tl::fail(tl::ErrorKind::MalformedInput, "trace '" + out.set.label + "' fails validation");
  }

  if (out.set.source_format == tl::SourceFormat::FlatProfile) {
    out.records = tl::flatten_flat(out.set);
  } else {
    tl::BuildOptions build;
    build.clip_partial_overlap = opt.clip;
    tl::BuildReport report;
    tl::Forest forest = tl::build_forest(out.set, build, &report);
    print_warnings(report.warnings);
    if (report.clipped_ns > 0)
      std::cerr << "clip: truncated " << report.clipped_ns << " ns total in '" << out.set.label
                << "'\n";
    tl::compute_self_times(forest);
    for (const tl::LaneConservation& lane : tl::conservation(forest)) {
      std::cerr << "conservation '" << out.set.label << "' lane '" << lane.lane_id
                << "': self sum " << lane.self_sum << " ns, root sum " << lane.root_sum << " ns"
                << (lane.self_sum == lane.root_sum ? "" : "  MISMATCH") << "\n";
    }
    out.records = tl::flatten(forest);
  }

  if (!opt.keep_profiler_events) {
    auto [kept, removed] =
        tl::strip_profiler_artifacts(std::move(out.records), opt.profiler_prefixes);
    out.records = std::move(kept);
    if (removed > 0)
      std::cerr << "profiler artifacts: removed " << tl::format_duration(removed)
                << " of self time from '" << out.set.label << "'\n";
  }

  if (!opt.baseline_wall.empty() && !opt.raw) {
    const std::int64_t baseline = tl::parse_duration(opt.baseline_wall);
    std::int64_t profiled = 0;
    if (!opt.profiled_wall.empty())
      profiled = tl::parse_duration(opt.profiled_wall);
    else if (out.set.wall_time_ns)
      profiled = *out.set.wall_time_ns;
    else
      tl::fail(tl::ErrorKind::ZeroWallTime,
               "trace '" + out.set.label +
                   "' carries no wall_time_ns; pass --profiled-wall to compensate");
    const tl::CompensationModel model = tl::derive(baseline, profiled);
    if (model.flagged)
      std::cerr << "warning: compensation scale " << model.scale.str()
                << " > 1 (baseline slower than profiled run)\n";
    std::cerr << "compensation: scaling by " << model.scale.str() << "\n";
    out.records = tl::apply(std::move(out.records), model);
  }
  return out;
}

void print_unmatched(const tl::UnmatchedReport& report, const std::string& label) {
  if (report.entries.empty()) return;
  std::int64_t total = 0;
  for (const tl::UnmatchedEntry& e : report.entries) total += e.self_ns;
  std::cerr << "unmatched '" << label << "': " << report.entries.size()
            << " distinct names fell to Other (" << tl::format_duration(total) << ")";
  const std::size_t top = std::min<std::size_t>(report.entries.size(), 5);
  for (std::size_t i = 0; i < top; ++i)
    std::cerr << (i == 0 ? ": " : ", ") << report.entries[i].name << " ("
              << tl::format_duration(report.entries[i].self_ns) << ")";
  std::cerr << "\n";
}

std::vector<tl::Breakdown> build_breakdowns(const CommonOptions& opt) {
  const tl::RuleSet rules = resolve_rules(opt.rules_source);
  std::vector<tl::Breakdown> breakdowns;
  for (const std::string& path : opt.inputs) {
    LoadedTrace loaded = load_and_flatten(path, opt);
    const tl::UnmatchedReport unmatched = tl::classify_all(loaded.records, rules);
    print_unmatched(unmatched, loaded.set.label);

    if (opt.per_device) {
      for (tl::Device device : {tl::Device::Cpu, tl::Device::Gpu}) {
        std::vector<tl::OpRecord> subset;
        for (const tl::OpRecord& r : loaded.records)
          if (r.device == device) subset.push_back(r);
        tl::Breakdown b = tl::aggregate(subset, rules.taxonomy(),
                                        loaded.set.label + " [" + tl::to_string(device) + "]");
        breakdowns.push_back(tl::scale_to_pipeline(b, opt.multiplier));
      }
    } else {
      tl::Breakdown b = tl::aggregate(loaded.records, rules.taxonomy(), loaded.set.label);
      breakdowns.push_back(tl::scale_to_pipeline(b, opt.multiplier));
    }
  }
  return breakdowns;
}

int cmd_convert(const CommonOptions& opt, const std::string& label) {
  tl::IngestOptions ingest;
  ingest.strict = opt.strict;
  std::vector<std::string> warnings;
  tl::TraceSet set = tl::read_trace(opt.inputs.front(), opt.format, label, ingest, &warnings);
  print_warnings(warnings);
  write_output(opt.output, tl::emit_canonical(set));
  return kExitOk;
}

int cmd_report(const CommonOptions& opt) {
  const std::vector<tl::Breakdown> breakdowns = build_breakdowns(opt);
  if (opt.emit == "table") {
    std::string out = tl::table_header() + "\n";
    for (const tl::Breakdown& b : breakdowns) out += tl::table_row(b) + "\n";
    write_output(opt.output, out);
  } else {
    write_output(opt.output, tl::emit_breakdowns(breakdowns, tl::parse_emit_format(opt.emit),
                                                 svg_style(opt)));
  }
  return kExitOk;
}

int cmd_heatmap(const CommonOptions& opt) {
  const std::vector<tl::Breakdown> breakdowns = build_breakdowns(opt);
  std::vector<std::string> warnings;
  const tl::HeatmapMatrix matrix = tl::heatmap(breakdowns, &warnings);
  print_warnings(warnings);
  write_output(opt.output,
               tl::emit_heatmap(matrix, tl::parse_emit_format(opt.emit), svg_style(opt)));
  return kExitOk;
}

int cmd_diff(const CommonOptions& opt) {
  const std::vector<tl::Breakdown> breakdowns = build_breakdowns(opt);
  const std::vector<tl::CategoryDelta> deltas = tl::diff(breakdowns[0], breakdowns[1]);

  std::string out;
  if (opt.emit == "csv") {
    out = "category,delta_ns,delta_fraction\n";
    for (const tl::CategoryDelta& d : deltas) {
      char frac[64];
      std::snprintf(frac, sizeof(frac), "%.9f", d.delta_fraction);
      out += d.category + "," + std::to_string(d.delta_ns) + "," + frac + "\n";
    }
  } else {
    char line[256];
    std::snprintf(line, sizeof(line), "%-20s %16s %12s\n", "category", "delta", "fraction");
    out += line;
    for (const tl::CategoryDelta& d : deltas) {
      std::snprintf(line, sizeof(line), "%-20s %16s %+12.4f\n", d.category.c_str(),
                    tl::format_duration(d.delta_ns).c_str(), d.delta_fraction);
      out += line;
    }
  }
  write_output(opt.output, out);
  return kExitOk;
}

int cmd_intensity(std::int64_t m, std::int64_t k, std::int64_t n, std::int64_t bytes,
                  std::optional<double> balance, double threshold,
                  const std::string& output) {
  const tl::GemmDims dims{m, k, n};
  const tl::IntensityEstimate est = tl::gemm_intensity(dims, bytes, threshold);

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "W (FLOPs):       %lld\n",
                static_cast<long long>(est.work_flops));
  out += buf;
  std::snprintf(buf, sizeof(buf), "Q (bytes):       %lld\n",
                static_cast<long long>(est.traffic_bytes));
  out += buf;
  std::snprintf(buf, sizeof(buf), "I (FLOPs/byte):  %s = %.6g\n", est.intensity.str().c_str(),
                est.intensity.value());
  out += buf;
  std::snprintf(buf, sizeof(buf), "tall-skinny:     %s\n", est.tall_skinny ? "yes" : "no");
  out += buf;
  if (balance) {
    const tl::Boundedness verdict =
        tl::boundedness(est, tl::MachineModel::from_balance(*balance));
    std::snprintf(buf, sizeof(buf), "boundedness:     %s (machine balance %.6g)\n",
                  tl::to_string(verdict), *balance);
    out += buf;
  }
  write_output(output, out);
  return kExitOk;
}

int cmd_rules_check(const std::string& source) {
  const tl::RuleSet rules = resolve_rules(source);
  std::cout << "ok: taxonomy '" << rules.taxonomy_name << "', "
            << rules.categories.size() << " categories, " << rules.rules.size() << " rules\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trace analysis: call trees, workload taxonomy, runtime breakdowns"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string convert_label;

  const auto add_io = [&](CLI::App* cmd, std::size_t min_inputs, std::size_t max_inputs) {
    cmd->add_option("inputs", opt.inputs, "input trace files ('-' for stdin)")
        ->required()
        ->expected(static_cast<int>(min_inputs), static_cast<int>(max_inputs));
    cmd->add_option("--format", opt.format, "input format")
        ->check(CLI::IsMember({"auto", "span", "flat", "canonical"}))
        ->capture_default_str();
    cmd->add_flag("--strict", opt.strict, "reject unknown fields in canonical input");
    cmd->add_option("-o,--output", opt.output, "output file ('-' for stdout)")
        ->capture_default_str();
  };
  const auto add_pipeline = [&](CLI::App* cmd) {
    cmd->add_option("--rules", opt.rules_source,
                    "rule file path or builtin:ml8 / builtin:symbolic "
                    "(default: $TRACELENS_RULES or builtin:ml8)");
    cmd->add_option("--baseline-wall", opt.baseline_wall,
                    "unprofiled wall time ('90ms', '1.5s', or ns) for overhead compensation");
    cmd->add_option("--profiled-wall", opt.profiled_wall,
                    "profiled wall time override (default: the trace's wall_time_ns)");
    cmd->add_flag("--raw", opt.raw, "report uncompensated times");
    cmd->add_flag("--clip", opt.clip, "truncate partially overlapping spans instead of failing");
    cmd->add_flag("--per-device", opt.per_device, "split each input into cpu and gpu rows");
    cmd->add_flag("--keep-profiler-events", opt.keep_profiler_events,
                  "keep profiler-internal events instead of stripping them");
    cmd->add_option("--profiler-prefix", opt.profiler_prefixes,
                    "name prefixes treated as profiler-internal")
        ->capture_default_str();
    cmd->add_option("--svg-bar-width", opt.svg_bar_width, "bar width of svg output, px")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--svg-height", opt.svg_height, "plot height of svg output, px")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--svg-colors", opt.svg_colors,
                    "comma-separated segment colors for svg output");
    cmd->add_option("--multiplier", opt.multiplier,
                    "scale every entry by an invocation count (e.g. frames per video)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  CLI::App* convert = app.add_subcommand("convert", "parse a trace and emit canonical JSON");
  add_io(convert, 1, 1);
  convert->add_option("--label", convert_label, "model/submodel label for the converted trace");

  CLI::App* report = app.add_subcommand("report", "per-category runtime breakdown");
  add_io(report, 1, 64);
  add_pipeline(report);
  report->add_option("--emit", opt.emit, "table, csv, json, or svg")
      ->check(CLI::IsMember({"table", "csv", "json", "svg"}))
      ->capture_default_str();

  CLI::App* heatmap = app.add_subcommand("heatmap", "row-normalized proportion matrix");
  add_io(heatmap, 1, 64);
  add_pipeline(heatmap);
  heatmap->add_option("--emit", opt.emit, "csv, json, or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();

  CLI::App* diff_cmd = app.add_subcommand("diff", "per-category delta between two runs");
  add_io(diff_cmd, 2, 2);
  add_pipeline(diff_cmd);
  diff_cmd->add_option("--emit", opt.emit, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();

  std::int64_t gemm_m = 0, gemm_k = 0, gemm_n = 0, gemm_bytes = tl::kDefaultBytesPerElement;
  double ts_threshold = tl::kDefaultTallSkinnyRatio;
  std::optional<double> balance;
  CLI::App* intensity = app.add_subcommand("intensity", "GEMM work/traffic/intensity model");
  intensity->add_option("--m", gemm_m, "rows of the left operand")->required();
  intensity->add_option("--k", gemm_k, "shared dimension")->required();
  intensity->add_option("--n", gemm_n, "columns of the right operand")->required();
  intensity->add_option("--bytes", gemm_bytes, "bytes per element")
      ->check(CLI::IsMember({1, 2, 4, 8}))
      ->capture_default_str();
  intensity->add_option("--threshold", ts_threshold, "tall-skinny max/min ratio threshold")
      ->capture_default_str();
  std::string intensity_output = "-";
  intensity->add_option("-o,--output", intensity_output, "output file")->capture_default_str();
  double balance_value = 0.0;
  CLI::Option* balance_opt = intensity->add_option(
      "--balance", balance_value, "machine balance (peak FLOPs per byte) for a boundedness verdict");

  CLI::App* rules = app.add_subcommand("rules", "rule-set utilities");
  rules->require_subcommand(1);
  std::string rules_file;
  CLI::App* rules_check = rules->add_subcommand("check", "validate a rule file");
  rules_check->add_option("file", rules_file, "rule file path or builtin:<name>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (convert->parsed()) return cmd_convert(opt, convert_label);
    if (report->parsed()) return cmd_report(opt);
    if (heatmap->parsed()) return cmd_heatmap(opt);
    if (diff_cmd->parsed()) return cmd_diff(opt);
    if (intensity->parsed()) {
      if (balance_opt->count() > 0) balance = balance_value;
      return cmd_intensity(gemm_m, gemm_k, gemm_n, gemm_bytes, balance, ts_threshold,
                           intensity_output);
    }
    if (rules_check->parsed()) return cmd_rules_check(rules_file);
  } catch (const tl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_input_error() ? kExitInput : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
