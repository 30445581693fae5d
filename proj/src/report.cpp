#include "shapeeval/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "json.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace shapeeval {

using internal::FormatShortest;
using internal::ParseDouble;
using internal::SplitLines;
using internal::Tokenize;
using internal::Trim;
using Json = nlohmann::ordered_json;

TableStyle ParseTableStyle(std::string_view name) {
  if (name == "percent") return TableStyle::kPercent;
  if (name == "fraction") return TableStyle::kFraction;
  throw InputError(fmt::format("unknown table style '{}'", name));
}

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw InputError(fmt::format("unknown output format '{}'", name));
}

std::string_view FileExtension(OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return "txt";
    case OutputFormat::kCsv:
      return "csv";
    case OutputFormat::kJson:
      return "json";
  }
  return "txt";
}

std::string FormatScore(double value, TableStyle style) {
  if (std::isnan(value)) return "-";
  if (style == TableStyle::kPercent) return fmt::format("{:.2f}%", value * 100.0);
  return fmt::format("{:.3f}", value);
}

namespace {

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string CsvNumber(double v) {
  return std::isnan(v) ? std::string() : FormatShortest(v);
}

// RFC 4180 record splitter; quoted fields may contain commas and quotes.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text,
                                               const std::string& source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_row();
      ++line;
    } else if (ch != '\r') {
      field += ch;
      field_started = true;
    }
  }
  if (quoted) throw ParseError(source, line, "unterminated quoted field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

Json ScoresJson(const MetricScores& s) {
  Json out = Json::object();
  for (Metric m : kAllMetrics) {
    out[std::string(MetricKey(m))] = s.has(m) ? Json(s[m]) : Json(nullptr);
  }
  return out;
}

}  // namespace

std::string RenderSummaryTable(const std::vector<RunSummary>& summaries,
                               TableStyle style) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"Run"};
  for (Metric m : kAllMetrics) header.emplace_back(MetricHeading(m));
  cells.push_back(header);
  for (const auto& s : summaries) {
    std::vector<std::string> row = {s.run_name.empty() ? "-" : s.run_name};
    for (Metric m : kAllMetrics) row.push_back(FormatScore(s.overall[m], style));
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      widths[k] = std::max(widths[k], row[k].size());
    }
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line = fmt::format("{:<{}}", row[0], widths[0]);
    for (std::size_t k = 1; k < row.size(); ++k) {
      line += fmt::format("  {:>{}}", row[k], widths[k]);
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<RunSummary> ParseSummaryTable(std::string_view text) {
  std::vector<RunSummary> out;
  const auto lines = SplitLines(text);
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (Trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto tokens = Tokenize(line);
    if (tokens.size() < kMetricCount + 1) {
      throw ParseError("<table>", i + 1, "expected a run name and six values");
    }
    const std::size_t first_value = tokens.size() - kMetricCount;
    RunSummary s;
    const std::size_t name_end =
        static_cast<std::size_t>(tokens[first_value].data() - line.data());
    s.run_name = std::string(Trim(line.substr(0, name_end)));
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      std::string_view token = tokens[first_value + k];
      if (token == "-") continue;
      double scale = 1.0;
      if (!token.empty() && token.back() == '%') {
        token.remove_suffix(1);
        scale = 0.01;
      }
      auto v = ParseDouble(token);
      if (!v) {
        throw ParseError("<table>", i + 1,
                         fmt::format("'{}' is not a score", tokens[first_value + k]));
      }
      s.overall.values[k] = *v * scale;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string RenderSummaryCsv(const std::vector<RunSummary>& summaries) {
  std::string out = "run,method,queries";
  for (Metric m : kAllMetrics) out += fmt::format(",{}", MetricKey(m));
  out += '\n';
  for (const auto& s : summaries) {
    out += fmt::format("{},{},{}", CsvField(s.run_name), CsvField(s.method_label),
                       s.query_count);
    for (Metric m : kAllMetrics) out += "," + CsvNumber(s.overall[m]);
    out += '\n';
  }
  return out;
}

std::vector<RunSummary> ParseSummaryCsv(std::string_view text,
                                        const std::string& source_name) {
  const auto rows = ParseCsv(text, source_name);
  if (rows.empty()) throw ParseError(source_name, 0, "empty summary CSV");
  const auto& header = rows[0];
  std::map<std::string, std::size_t> column;
  for (std::size_t k = 0; k < header.size(); ++k) column[header[k]] = k;
  if (column.count("run") == 0) {
    throw ParseError(source_name, 1, "summary CSV needs a 'run' column");
  }
  std::vector<RunSummary> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError(source_name, r + 1,
                       fmt::format("expected {} fields, got {}", header.size(),
                                   row.size()));
    }
    RunSummary s;
    s.run_name = row[column["run"]];
    if (auto it = column.find("method"); it != column.end()) {
      s.method_label = row[it->second];
    }
    for (Metric m : kAllMetrics) {
      auto it = column.find(std::string(MetricKey(m)));
      if (it == column.end() || row[it->second].empty()) continue;
      auto v = ParseDouble(row[it->second]);
      if (!v) {
        throw ParseError(source_name, r + 1,
                         fmt::format("'{}' is not a number", row[it->second]));
      }
      s.overall[m] = *v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string RenderSummaryJson(const std::vector<RunSummary>& summaries) {
  Json runs = Json::array();
  for (const auto& s : summaries) {
    Json run;
    run["run"] = s.run_name;
    run["method"] = s.method_label;
    run["queries"] = s.query_count;
    run["excluded_queries"] = s.excluded_queries;
    run["scores"] = ScoresJson(s.overall);
    Json meta = Json::object();
    if (s.meta.reported_query_time_ms) {
      meta["query_time_ms"] = *s.meta.reported_query_time_ms;
    }
    if (s.meta.descriptor_bytes) meta["descriptor_bytes"] = *s.meta.descriptor_bytes;
    run["meta"] = meta;
    Json per_class = Json::object();
    for (const auto& [label, scores] : s.per_class) {
      per_class[label] = ScoresJson(scores);
    }
    run["per_class"] = per_class;
    runs.push_back(std::move(run));
  }
  Json root;
  root["runs"] = std::move(runs);
  return root.dump(2) + "\n";
}

std::string RenderSummary(const std::vector<RunSummary>& summaries,
                          OutputFormat format, TableStyle style) {
  switch (format) {
    case OutputFormat::kText:
      return RenderSummaryTable(summaries, style);
    case OutputFormat::kCsv:
      return RenderSummaryCsv(summaries);
    case OutputFormat::kJson:
      return RenderSummaryJson(summaries);
  }
  return {};
}

std::string RenderPerQueryCsv(const RunSummary& summary) {
  std::string out = "query,class,nn,ft,st,e,dcg,ap\n";
  for (const auto& q : summary.per_query) {
    out += CsvField(q.query) + "," + CsvField(q.class_label);
    for (Metric m : kAllMetrics) out += "," + CsvNumber(q.scores[m]);
    out += '\n';
  }
  return out;
}

std::string RenderPerClassCsv(const RunSummary& summary) {
  std::map<std::string_view, std::size_t> counts;
  for (const auto& q : summary.per_query) ++counts[q.class_label];
  std::string out = "class,queries,nn,ft,st,e,dcg,map\n";
  for (const auto& [label, scores] : summary.per_class) {
    out += fmt::format("{},{}", CsvField(label), counts[label]);
    for (Metric m : kAllMetrics) out += "," + CsvNumber(scores[m]);
    out += '\n';
  }
  return out;
}

std::string RenderComparison(const ComparisonReport& report,
                             OutputFormat format) {
  const bool has_wins = !report.per_query_wins.empty();
  if (format == OutputFormat::kJson) {
    Json root;
    root["run_a"] = report.run_a;
    root["run_b"] = report.run_b;
    root["queries"] = report.query_count;
    Json metrics = Json::array();
    for (const auto& [m, d] : report.per_metric_delta) {
      Json row;
      row["metric"] = MetricKey(m);
      row["a"] = d.a;
      row["b"] = d.b;
      row["delta"] = d.delta;
      if (has_wins) {
        const WinCounts& w = report.per_query_wins.at(m);
        row["wins_a"] = w.wins_a;
        row["wins_b"] = w.wins_b;
        row["ties"] = w.ties;
      }
      metrics.push_back(std::move(row));
    }
    root["metrics"] = std::move(metrics);
    return root.dump(2) + "\n";
  }
  if (format == OutputFormat::kCsv) {
    std::string out = "metric,a,b,delta,wins_a,wins_b,ties\n";
    for (const auto& [m, d] : report.per_metric_delta) {
      out += fmt::format("{},{},{},{}", MetricKey(m), FormatShortest(d.a),
                         FormatShortest(d.b), FormatShortest(d.delta));
      if (has_wins) {
        const WinCounts& w = report.per_query_wins.at(m);
        out += fmt::format(",{},{},{}\n", w.wins_a, w.wins_b, w.ties);
      } else {
        out += ",,,\n";
      }
    }
    return out;
  }
  std::string out = fmt::format("A: {}\nB: {}\nqueries: {}\n", report.run_a,
                                report.run_b, report.query_count);
  out += fmt::format("{:<10}  {:>8}  {:>8}  {:>9}", "metric", "A", "B", "B-A");
  if (has_wins) out += fmt::format("  {:>6}  {:>6}  {:>6}", "A wins", "B wins", "ties");
  out += '\n';
  for (const auto& [m, d] : report.per_metric_delta) {
    out += fmt::format("{:<10}  {:>8.4f}  {:>8.4f}  {:>+9.4f}", MetricHeading(m),
                       d.a, d.b, d.delta);
    if (has_wins) {
      const WinCounts& w = report.per_query_wins.at(m);
      out += fmt::format("  {:>6}  {:>6}  {:>6}", w.wins_a, w.wins_b, w.ties);
    }
    out += '\n';
  }
  return out;
}

std::string RenderReliability(const ReliabilityEstimate& estimate,
                              OutputFormat format) {
  if (format == OutputFormat::kJson) {
    Json root;
    root["metric"] = MetricKey(estimate.metric);
    root["trials"] = estimate.trials;
    root["seed"] = estimate.seed;
    root["classes"] = estimate.class_count;
    Json rates = Json::array();
    for (const auto& [size, rate] : estimate.swap_rate) {
      rates.push_back(Json{{"subset_size", size}, {"swap_rate", rate}});
    }
    root["swap_rates"] = std::move(rates);
    return root.dump(2) + "\n";
  }
  if (format == OutputFormat::kCsv) {
    std::string out = "subset_size,swap_rate\n";
    for (const auto& [size, rate] : estimate.swap_rate) {
      out += fmt::format("{},{}\n", size, FormatShortest(rate));
    }
    return out;
  }
  std::string out = fmt::format(
      "metric: {}\ntrials: {}\nseed: {}\nclasses: {}\n{:>11}  {:>9}\n",
      MetricKey(estimate.metric), estimate.trials, estimate.seed,
      estimate.class_count, "subset_size", "swap_rate");
  for (const auto& [size, rate] : estimate.swap_rate) {
    out += fmt::format("{:>11}  {:>9.4f}\n", size, rate);
  }
  return out;
}

RunCurves BuildRunCurves(const Run& run, const Classification& c,
                         std::size_t recall_levels,
                         const EvaluationOptions& options) {
  if (recall_levels < 1) throw InputError("recall levels must be >= 1");
  const std::vector<ObjectId> queries = c.Objects();
  std::vector<GainVector> gains(queries.size());
  internal::ParallelFor(queries.size(), options.threads, [&](std::size_t i) {
    RankedList empty{queries[i], {}, {}};
    auto it = run.lists.find(queries[i]);
    gains[i] = MakeGainVector(it == run.lists.end() ? empty : it->second, c,
                              options.unknown_objects);
  });

  std::size_t length = c.object_count() > 0 ? c.object_count() - 1 : 0;
  for (const auto& g : gains) length = std::max(length, g.size());
  length = std::max<std::size_t>(length, 1);

  RunCurves curves;
  curves.run_name = run.name;
  std::vector<double> pr_sum(recall_levels + 1, 0.0);
  std::vector<double> ndcg_sum(length, 0.0);
  std::size_t included = 0;
  for (auto& g : gains) {
    if (g.relevant_total == 0) continue;
    ++included;
    const PrCurve pr = ComputePrCurve(g, recall_levels);
    for (std::size_t t = 0; t <= recall_levels; ++t) {
      pr_sum[t] += pr.interpolated[t].precision;
    }
    g.gains.resize(length, 0);
    const DcgCurve dcg = ComputeDcgCurve(g);
    for (std::size_t k = 0; k < length; ++k) ndcg_sum[k] += dcg.ndcg[k];
  }
  if (included == 0) {
    throw EvaluationError(fmt::format("run '{}' has no evaluable query", run.name));
  }
  const double n = static_cast<double>(included);
  for (std::size_t t = 0; t <= recall_levels; ++t) {
    curves.pr.push_back({static_cast<double>(t) / static_cast<double>(recall_levels),
                         pr_sum[t] / n});
  }
  curves.ndcg.reserve(length);
  for (double v : ndcg_sum) curves.ndcg.push_back(v / n);
  return curves;
}

namespace {

std::string Slug(std::string_view name) {
  std::string out;
  for (char ch : name) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '-' || ch == '.';
    out += keep ? ch : '_';
  }
  if (out.empty()) out = "run";
  return out;
}

}  // namespace

std::vector<std::string> ExportCurves(const CurveBundle& bundle,
                                      const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) {
    throw InputError(fmt::format("cannot create output directory '{}'", directory));
  }
  std::vector<std::string> written;
  std::set<std::string> used;
  Json curves = Json::array();
  for (const auto& run : bundle.runs) {
    std::string slug = Slug(run.run_name);
    for (int k = 2; used.count(slug) > 0; ++k) {
      slug = fmt::format("{}_{}", Slug(run.run_name), k);
    }
    used.insert(slug);

    std::string pr_csv = "recall,precision\n";
    for (const auto& p : run.pr) {
      pr_csv += FormatShortest(p.recall) + "," + FormatShortest(p.precision) + "\n";
    }
    std::string ndcg_csv = "rank,ndcg\n";
    for (std::size_t k = 0; k < run.ndcg.size(); ++k) {
      ndcg_csv += fmt::format("{},{}\n", k + 1, FormatShortest(run.ndcg[k]));
    }
    const std::string pr_name = "pr_" + slug + ".csv";
    const std::string ndcg_name = "ndcg_" + slug + ".csv";
    const std::string pr_path = (fs::path(directory) / pr_name).string();
    const std::string ndcg_path = (fs::path(directory) / ndcg_name).string();
    internal::WriteFile(pr_path, pr_csv);
    internal::WriteFile(ndcg_path, ndcg_csv);
    written.push_back(pr_path);
    written.push_back(ndcg_path);
    curves.push_back(Json{{"run", run.run_name},
                          {"type", "pr"},
                          {"file", pr_name},
                          {"points", run.pr.size()},
                          {"precision", "interpolated"}});
    curves.push_back(Json{{"run", run.run_name},
                          {"type", "ndcg"},
                          {"file", ndcg_name},
                          {"points", run.ndcg.size()}});
  }
  Json manifest;
  manifest["version"] = 1;
  manifest["recall_levels"] = bundle.recall_levels;
  manifest["curves"] = std::move(curves);
  const std::string manifest_path = (fs::path(directory) / "manifest.json").string();
  internal::WriteFile(manifest_path, manifest.dump(2) + "\n");
  written.push_back(manifest_path);
  return written;
}

PlotArea ComputePlotArea(const SvgOptions& options) {
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  PlotArea area;
  area.left = kLeft;
  area.top = kTop;
  area.width = std::max(1.0, options.width - kLeft - kRight);
  area.height = std::max(1.0, options.height - kTop - kBottom);
  return area;
}

const std::vector<std::string>& SvgPalette() {
  static const std::vector<std::string> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kPalette;
}

namespace {

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

std::string Coord(double v) { return fmt::format("{:.2f}", v); }

std::vector<PrPoint> CurvePoints(const RunCurves& run, CurveKind kind) {
  if (kind == CurveKind::kPrecisionRecall) return run.pr;
  std::vector<PrPoint> points;
  const std::size_t n = run.ndcg.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
    points.push_back({x, run.ndcg[k]});
  }
  if (points.size() == 1) points.push_back({1.0, points[0].precision});
  return points;
}

}  // namespace

std::string RenderSvg(const CurveBundle& bundle, const SvgOptions& options) {
  if (bundle.runs.empty()) throw InputError("cannot plot an empty curve bundle");
  const PlotArea area = ComputePlotArea(options);
  const auto& palette = SvgPalette();
  const bool pr = options.kind == CurveKind::kPrecisionRecall;

  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" "
      "height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      options.width, options.height, options.width, options.height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                     options.width, options.height);
  if (!options.title.empty()) {
    out += fmt::format(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">{}</text>\n",
        Coord(options.width / 2.0), XmlEscape(options.title));
  }

  out += "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int k = 0; k <= 10; ++k) {
    const double v = k / 10.0;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>\n",
                       Coord(area.X(v)), Coord(area.Y(0)), Coord(area.Y(1)));
    out += fmt::format("<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\"/>\n",
                       Coord(area.Y(v)), Coord(area.X(0)), Coord(area.X(1)));
  }
  out += "</g>\n";
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"#000000\" stroke-width=\"1\"/>\n",
      Coord(area.left), Coord(area.top), Coord(area.width), Coord(area.height));

  out += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 10; k += 2) {
    const double v = k / 10.0;
    const std::string label = fmt::format("{:.1f}", v);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       Coord(area.X(v)), Coord(area.Y(0) + 16), label);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                       Coord(area.X(0) - 6), Coord(area.Y(v) + 4), label);
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     Coord(area.X(0.5)), Coord(area.Y(0) + 36),
                     pr ? "Recall" : "Rank (fraction of list)");
  out += fmt::format(
      "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      "{0})\">{1}</text>\n",
      Coord(area.Y(0.5)), pr ? "Precision" : "NDCG");
  out += "</g>\n";

  out += "<g class=\"curves\" fill=\"none\" stroke-width=\"2\">\n";
  for (std::size_t i = 0; i < bundle.runs.size(); ++i) {
    std::string points;
    for (const auto& p : CurvePoints(bundle.runs[i], options.kind)) {
      if (!points.empty()) points += ' ';
      const double x = std::clamp(p.recall, 0.0, 1.0);
      const double y = std::clamp(p.precision, 0.0, 1.0);
      points += Coord(area.X(x)) + "," + Coord(area.Y(y));
    }
    out += fmt::format("<polyline stroke=\"{}\" points=\"{}\"/>\n",
                       palette[i % palette.size()], points);
  }
  out += "</g>\n";

  if (options.legend) {
    out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double x = area.X(1) - 150;
    for (std::size_t i = 0; i < bundle.runs.size(); ++i) {
      const double y = area.top + 14 + 16.0 * static_cast<double>(i);
      out += fmt::format(
          "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
          "stroke-width=\"2\"/>\n",
          Coord(x), Coord(y - 4), Coord(x + 20), Coord(y - 4),
          palette[i % palette.size()]);
      out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", Coord(x + 26),
                         Coord(y), XmlEscape(bundle.runs[i].run_name));
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace shapeeval
