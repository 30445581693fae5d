#include "shapeeval/cli.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <set>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "shapeeval/analysis.hpp"
#include "shapeeval/dataset.hpp"
#include "shapeeval/report.hpp"
#include "shapeeval/runs.hpp"
#include "text_util.hpp"

namespace shapeeval {

namespace {

namespace fs = std::filesystem;

constexpr const char* kFormatsHelp = R"(File formats:
  classification (simple):   <object_id> <class_label>      one per line, '#' comments
  classification (cla):      PSB 1
                             <num_classes> <num_models>
                             <class> <parent> <count>
                             <object_id>                    (count lines per class)
  run file:                  <query_id> <object_id> <score> lower score = better match;
                             ties broken by object_id. Directives: '# name: X',
                             '# method: X', '# query_time_ms: N', '# descriptor_bytes: N'
  matrix (text):             N, then N ids, then N rows of N dissimilarities
  matrix (csv):              ,id1,...,idN  then  idI,v1,...,vN  per row
  summary (csv):             run,method,queries,nn,ft,st,e,dcg,map  (compare only)
Inputs may be prefixed with a format tag: run:PATH, matrix:PATH, summary:PATH.
Exit status: 0 success, 1 usage or input error, 2 evaluation error.)";

enum class InputKind { kAuto, kRun, kMatrix, kSummary };

struct InputSpec {
  InputKind kind = InputKind::kAuto;
  std::string path;
};

InputSpec ParseInputSpec(const std::string& arg) {
  const std::pair<const char*, InputKind> kTags[] = {
      {"run:", InputKind::kRun},
      {"matrix:", InputKind::kMatrix},
      {"summary:", InputKind::kSummary}};
  for (const auto& [tag, kind] : kTags) {
    const std::string_view prefix(tag);
    if (arg.rfind(prefix, 0) == 0) return {kind, arg.substr(prefix.size())};
  }
  return {InputKind::kAuto, arg};
}

InputKind DetectKind(const std::string& text) {
  for (std::string_view line : internal::SplitLines(text)) {
    line = internal::StripComment(line);
    if (line.empty()) continue;
    if (line.find(',') != std::string_view::npos) return InputKind::kMatrix;
    const auto tokens = internal::Tokenize(line);
    if (tokens.size() == 1 && internal::ParseInt(tokens[0])) {
      return InputKind::kMatrix;
    }
    return InputKind::kRun;
  }
  return InputKind::kRun;
}

std::string StemOf(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  return stem.empty() ? path : stem;
}

struct LoadedInput {
  std::optional<Run> run;
  std::optional<DissimilarityMatrix> matrix;
  std::vector<RunSummary> stored;
};

LoadedInput LoadInput(const InputSpec& spec, Diagnostics* warnings) {
  const std::string text = internal::ReadFile(spec.path);
  InputKind kind = spec.kind == InputKind::kAuto ? DetectKind(text) : spec.kind;
  LoadedInput input;
  if (kind == InputKind::kSummary) {
    input.stored = ParseSummaryCsv(text, spec.path);
    if (input.stored.size() != 1) {
      throw InputError(fmt::format("'{}' must hold exactly one run summary, found {}",
                                   spec.path, input.stored.size()));
    }
  } else if (kind == InputKind::kMatrix) {
    input.matrix = ParseMatrix(text, spec.path);
    input.run = RankedListsFromMatrix(*input.matrix, StemOf(spec.path));
  } else {
    Run run = ParseRun(text, spec.path, warnings);
    if (run.name == spec.path) run.name = StemOf(spec.path);
    input.run = std::move(run);
  }
  return input;
}

struct Config {
  std::string classification_path;
  std::string classification_format = "auto";
  std::vector<std::string> inputs;
  std::size_t cutoff = kDefaultCutoff;
  double alpha = 1.0;
  std::size_t recall_levels = kDefaultRecallLevels;
  std::string output_dir;
  std::string output_format = "text";
  std::string style = "percent";
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::vector<std::size_t> sizes;
  std::string metric;
  std::string to;
  bool strict = false;
  std::size_t threads = 1;
  std::size_t max_warnings = 20;
};

class Session {
 public:
  Session(const Config& config, std::ostream& out, std::ostream& err)
      : config_(config), out_(out), err_(err) {}

  int Eval();
  int Compare();
  int Curve();
  int Reliability();
  int Validate();
  int Convert();

 private:
  Classification LoadClassificationOrThrow() const {
    if (config_.classification_path.empty()) {
      throw InputError("a classification file is required (-c)");
    }
    return LoadClassification(config_.classification_path,
                              ParseClassificationFormat(config_.classification_format));
  }

  EvaluationOptions Options() const {
    EvaluationOptions options;
    options.f_params.cutoff = config_.cutoff;
    options.f_params.alpha = config_.alpha;
    options.unknown_objects =
        config_.strict ? UnknownObjectPolicy::kError : UnknownObjectPolicy::kWarn;
    options.threads = config_.threads;
    return options;
  }

  void CheckConfig() const {
    if (config_.cutoff < 1) throw InputError("--cutoff must be >= 1");
    if (config_.recall_levels < 2) throw InputError("--levels must be >= 2");
  }

  std::vector<Run> LoadRuns() {
    std::vector<Run> runs;
    for (const auto& arg : config_.inputs) {
      LoadedInput input = LoadInput(ParseInputSpec(arg), &warnings_);
      if (!input.run) {
        throw InputError(fmt::format("'{}' is a stored summary; this command "
                                     "needs a run or matrix",
                                     arg));
      }
      runs.push_back(std::move(*input.run));
    }
    return runs;
  }

  void FlushWarnings() {
    std::size_t shown = 0;
    for (const auto& d : warnings_) {
      if (shown++ == config_.max_warnings) {
        err_ << fmt::format("warning: ... {} more warning(s) suppressed\n",
                            warnings_.size() - config_.max_warnings);
        break;
      }
      err_ << "warning: " << d.message << '\n';
    }
    warnings_.clear();
  }

  void WriteOutput(const std::string& name, const std::string& contents) {
    const fs::path dir(config_.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw InputError(fmt::format("cannot create output directory '{}'",
                                   config_.output_dir));
    }
    internal::WriteFile((dir / name).string(), contents);
  }

  static std::string FileSlug(std::string_view name) {
    std::string out;
    for (char ch : name) {
      const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                        (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
      out += keep ? ch : '_';
    }
    return out.empty() ? "run" : out;
  }

  CurveBundle BuildBundle(const std::vector<Run>& runs, const Classification& c) {
    CurveBundle bundle;
    bundle.recall_levels = config_.recall_levels;
    for (const auto& run : runs) {
      bundle.runs.push_back(BuildRunCurves(run, c, config_.recall_levels, Options()));
    }
    return bundle;
  }

  void WriteCurves(const CurveBundle& bundle) {
    ExportCurves(bundle, (fs::path(config_.output_dir) / "curves").string());
    SvgOptions svg;
    svg.title = "Precision-recall";
    WriteOutput("pr.svg", RenderSvg(bundle, svg));
    svg.title = "Normalized DCG by rank";
    svg.kind = CurveKind::kNdcg;
    WriteOutput("ndcg.svg", RenderSvg(bundle, svg));
  }

  const Config& config_;
  std::ostream& out_;
  std::ostream& err_;
  Diagnostics warnings_;
};

int Session::Eval() {
  CheckConfig();
  if (config_.inputs.empty()) throw InputError("eval needs at least one input");
  const Classification c = LoadClassificationOrThrow();
  const std::vector<Run> runs = LoadRuns();
  const OutputFormat format = ParseOutputFormat(config_.output_format);
  const TableStyle style = ParseTableStyle(config_.style);

  std::vector<RunSummary> summaries;
  for (const auto& run : runs) {
    summaries.push_back(EvaluateRun(run, c, Options(), &warnings_));
  }
  FlushWarnings();
  const std::string rendered = RenderSummary(summaries, format, style);
  out_ << rendered;

  if (!config_.output_dir.empty()) {
    WriteOutput(fmt::format("summary.{}", FileExtension(format)), rendered);
    if (format != OutputFormat::kCsv) {
      WriteOutput("summary.csv", RenderSummaryCsv(summaries));
    }
    std::set<std::string> used;
    for (const auto& s : summaries) {
      std::string slug = FileSlug(s.run_name);
      for (int k = 2; used.count(slug) > 0; ++k) {
        slug = fmt::format("{}_{}", FileSlug(s.run_name), k);
      }
      used.insert(slug);
      WriteOutput(fmt::format("per_query_{}.csv", slug), RenderPerQueryCsv(s));
      WriteOutput(fmt::format("per_class_{}.csv", slug), RenderPerClassCsv(s));
    }
    WriteCurves(BuildBundle(runs, c));
  }
  return kExitOk;
}

int Session::Compare() {
  CheckConfig();
  if (config_.inputs.size() != 2) {
    throw InputError(fmt::format("compare needs exactly 2 inputs, got {}",
                                 config_.inputs.size()));
  }
  const OutputFormat format = ParseOutputFormat(config_.output_format);
  std::vector<RunSummary> summaries;
  std::optional<Classification> c;
  for (const auto& arg : config_.inputs) {
    LoadedInput input = LoadInput(ParseInputSpec(arg), &warnings_);
    if (!input.stored.empty()) {
      summaries.push_back(std::move(input.stored.front()));
      continue;
    }
    if (!c) c = LoadClassificationOrThrow();
    summaries.push_back(EvaluateRun(*input.run, *c, Options(), &warnings_));
  }
  FlushWarnings();
  const std::string rendered =
      RenderComparison(CompareRuns(summaries[0], summaries[1]), format);
  out_ << rendered;
  if (!config_.output_dir.empty()) {
    WriteOutput(fmt::format("comparison.{}", FileExtension(format)), rendered);
  }
  return kExitOk;
}

int Session::Curve() {
  CheckConfig();
  if (config_.inputs.empty()) throw InputError("curve needs at least one input");
  if (config_.output_dir.empty()) throw InputError("curve needs an output directory (-o)");
  const Classification c = LoadClassificationOrThrow();
  const std::vector<Run> runs = LoadRuns();
  const CurveBundle bundle = BuildBundle(runs, c);
  FlushWarnings();
  const auto written =
      ExportCurves(bundle, (fs::path(config_.output_dir) / "curves").string());
  SvgOptions svg;
  svg.title = "Precision-recall";
  WriteOutput("pr.svg", RenderSvg(bundle, svg));
  svg.title = "Normalized DCG by rank";
  svg.kind = CurveKind::kNdcg;
  WriteOutput("ndcg.svg", RenderSvg(bundle, svg));
  for (const auto& path : written) out_ << path << '\n';
  out_ << (fs::path(config_.output_dir) / "pr.svg").string() << '\n';
  out_ << (fs::path(config_.output_dir) / "ndcg.svg").string() << '\n';
  return kExitOk;
}

int Session::Reliability() {
  CheckConfig();
  if (config_.inputs.size() != 2) {
    throw InputError(fmt::format("reliability needs exactly 2 inputs, got {}",
                                 config_.inputs.size()));
  }
  if (config_.metric.empty()) throw InputError("reliability needs --metric");
  if (config_.sizes.empty()) throw InputError("reliability needs --sizes");
  const Metric metric = ParseMetric(config_.metric);
  const OutputFormat format = ParseOutputFormat(config_.output_format);
  const Classification c = LoadClassificationOrThrow();
  const std::vector<Run> runs = LoadRuns();
  const RunSummary a = EvaluateRun(runs[0], c, Options(), &warnings_);
  const RunSummary b = EvaluateRun(runs[1], c, Options(), &warnings_);
  FlushWarnings();
  const ReliabilityEstimate estimate = ReliabilitySwapRate(
      a, b, metric, config_.sizes, config_.trials, config_.seed, config_.threads);
  const std::string rendered = RenderReliability(estimate, format);
  out_ << rendered;
  if (!config_.output_dir.empty()) {
    WriteOutput(fmt::format("reliability.{}", FileExtension(format)), rendered);
  }
  return kExitOk;
}

int Session::Validate() {
  if (config_.classification_path.empty() && config_.inputs.empty()) {
    throw InputError("validate needs a classification (-c) or an input");
  }
  Diagnostics diagnostics;
  if (!config_.classification_path.empty()) {
    const Classification c = LoadClassificationOrThrow();
    const ClassStats stats = ComputeClassStats(c);
    out_ << fmt::format("{}: {} classes, {} objects", config_.classification_path,
                        stats.class_count, stats.object_count);
    if (stats.min_class_size) {
      out_ << fmt::format(", class sizes {}..{}", *stats.min_class_size,
                          *stats.max_class_size);
    }
    out_ << '\n';
    for (auto& d : ValidateClassification(c)) diagnostics.push_back(std::move(d));
  }
  for (const auto& arg : config_.inputs) {
    LoadedInput input = LoadInput(ParseInputSpec(arg), &diagnostics);
    if (input.matrix) input.matrix->Validate();
    if (input.run) {
      out_ << fmt::format("{}: {} queries\n", arg, input.run->lists.size());
    }
  }
  for (const auto& d : diagnostics) {
    out_ << (d.severity == Severity::kError ? "error: " : "warning: ") << d.message
         << '\n';
  }
  const std::size_t errors = CountErrors(diagnostics);
  out_ << fmt::format("{} errors, {} warnings\n", errors, CountWarnings(diagnostics));
  return errors == 0 ? kExitOk : kExitInputError;
}

int Session::Convert() {
  std::string converted;
  if (config_.to == "simple" || config_.to == "cla") {
    if (!config_.inputs.empty()) {
      throw InputError("classification conversion takes only -c");
    }
    const Classification c = LoadClassificationOrThrow();
    converted = config_.to == "simple" ? SerializeSimple(c) : SerializeCla(c);
  } else {
    if (config_.inputs.size() != 1) {
      throw InputError(fmt::format("convert needs exactly 1 input, got {}",
                                   config_.inputs.size()));
    }
    LoadedInput input = LoadInput(ParseInputSpec(config_.inputs[0]), &warnings_);
    FlushWarnings();
    if (!input.run) throw InputError("convert cannot read stored summaries");
    if (config_.to == "run") {
      converted = SerializeRun(*input.run);
    } else if (config_.to == "matrix") {
      converted = SerializeMatrix(input.matrix ? *input.matrix
                                               : MatrixFromRun(*input.run));
    } else {
      throw InputError(fmt::format("unknown --to target '{}'", config_.to));
    }
  }
  if (config_.output_dir.empty()) {
    out_ << converted;
  } else {
    internal::WriteFile(config_.output_dir, converted);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Config config;
  CLI::App app{"Retrieval evaluation for classification-based benchmarks",
               "shapeeval"};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool needs_inputs) {
    cmd->add_option("-c,--classification", config.classification_path,
                    "Ground-truth classification file");
    cmd->add_option("--classification-format", config.classification_format,
                    "auto, simple or cla")
        ->check(CLI::IsMember({"auto", "simple", "cla"}));
    auto* inputs = cmd->add_option("inputs", config.inputs,
                                   "Run or matrix files (optionally tagged run:, "
                                   "matrix:, summary:)");
    if (needs_inputs) inputs->required();
  };
  auto add_eval = [&](CLI::App* cmd) {
    cmd->add_option("--cutoff", config.cutoff, "E-measure cutoff rank")
        ->capture_default_str();
    cmd->add_option("--alpha", config.alpha, "F-measure weight")->capture_default_str();
    cmd->add_option("--levels", config.recall_levels, "Interpolated recall levels")
        ->capture_default_str();
    cmd->add_flag("--strict", config.strict,
                  "Fail on ranked objects missing from the classification");
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    cmd->add_option("--max-warnings", config.max_warnings,
                    "Warnings printed before the rest are summarized")
        ->capture_default_str();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", config.output_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
  };

  auto* eval = app.add_subcommand("eval", "Score runs with NN, FT, ST, E, DCG and MAP");
  add_common(eval, true);
  add_eval(eval);
  add_format(eval);
  eval->add_option("-o,--output-dir", config.output_dir,
                   "Directory for summary, per-query, per-class and curve files");
  eval->add_option("--style", config.style, "percent or fraction")
      ->check(CLI::IsMember({"percent", "fraction"}))
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare two runs metric by metric");
  add_common(compare, true);
  add_eval(compare);
  add_format(compare);
  compare->add_option("-o,--output-dir", config.output_dir, "Output directory");

  auto* curve = app.add_subcommand("curve", "Export precision-recall and NDCG curves");
  add_common(curve, true);
  add_eval(curve);
  curve->add_option("-o,--output-dir", config.output_dir, "Output directory")
      ->required();

  auto* reliability = app.add_subcommand(
      "reliability", "Swap rate of two runs over disjoint random class subsets");
  add_common(reliability, true);
  add_eval(reliability);
  add_format(reliability);
  reliability->add_option("-o,--output-dir", config.output_dir, "Output directory");
  reliability->add_option("--metric", config.metric,
                          "Deciding metric: nn, ft, st, e, dcg or map")
      ->required();
  reliability->add_option("--sizes", config.sizes, "Subset sizes (classes)")
      ->delimiter(',')
      ->required();
  reliability->add_option("--trials", config.trials, "Trials per subset size")
      ->capture_default_str();
  reliability->add_option("--seed", config.seed, "Random seed")->capture_default_str();

  auto* validate = app.add_subcommand(
      "validate", "Check a classification, run or matrix file");
  add_common(validate, false);

  auto* convert = app.add_subcommand(
      "convert", "Convert between matrix and run files, or simple and cla");
  add_common(convert, false);
  convert->add_option("--to", config.to, "run, matrix, simple or cla")
      ->check(CLI::IsMember({"run", "matrix", "simple", "cla"}))
      ->required();
  convert->add_option("-o,--output", config.output_dir,
                      "Output file (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitInputError;
  }

  Session session(config, out, err);
  try {
    if (eval->parsed()) return session.Eval();
    if (compare->parsed()) return session.Compare();
    if (curve->parsed()) return session.Curve();
    if (reliability->parsed()) return session.Reliability();
    if (validate->parsed()) return session.Validate();
    if (convert->parsed()) return session.Convert();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEvaluationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitEvaluationError;
  }
  return kExitInputError;
}

}  // namespace shapeeval
