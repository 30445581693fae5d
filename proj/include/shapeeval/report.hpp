#ifndef SHAPEEVAL_REPORT_HPP_
#define SHAPEEVAL_REPORT_HPP_

// Text, CSV, JSON and SVG renderings. Every writer is a pure function of its
// input: no timestamps, hostnames or locale-dependent formatting.
//
// CSV output follows RFC 4180 (header row, LF line endings, '.' decimal
// separator, fields quoted only when they contain ',', '"' or a newline).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shapeeval/analysis.hpp"

namespace shapeeval {

enum class TableStyle { kPercent, kFraction };
enum class OutputFormat { kText, kCsv, kJson };

TableStyle ParseTableStyle(std::string_view name);
OutputFormat ParseOutputFormat(std::string_view name);
std::string_view FileExtension(OutputFormat format);

// "84.50%" / "0.884"; "-" for an unreported (NaN) value.
std::string FormatScore(double value, TableStyle style);

// Aligned plain-text table, one row per run, columns
// NN Tier1 Tier2 E-Measure DCG MAP.
std::string RenderSummaryTable(const std::vector<RunSummary>& summaries,
                               TableStyle style);
// Reads a table produced by RenderSummaryTable back into stored summaries
// (values as fractions, at the printed precision).
std::vector<RunSummary> ParseSummaryTable(std::string_view text);

// Full-precision CSV: run,method,queries,nn,ft,st,e,dcg,map.
std::string RenderSummaryCsv(const std::vector<RunSummary>& summaries);
// Stored summaries from such a CSV; empty cells mean "not reported".
std::vector<RunSummary> ParseSummaryCsv(std::string_view text,
                                        const std::string& source_name);
std::string RenderSummaryJson(const std::vector<RunSummary>& summaries);

std::string RenderSummary(const std::vector<RunSummary>& summaries,
                          OutputFormat format, TableStyle style);

// query,class,nn,ft,st,e,dcg,ap
std::string RenderPerQueryCsv(const RunSummary& summary);
// class,queries,nn,ft,st,e,dcg,map
std::string RenderPerClassCsv(const RunSummary& summary);

std::string RenderComparison(const ComparisonReport& report,
                             OutputFormat format);
std::string RenderReliability(const ReliabilityEstimate& estimate,
                              OutputFormat format);

struct RunCurves {
  std::string run_name;
  // Mean interpolated precision at recall levels t / T, t = 0..T.
  std::vector<PrPoint> pr;
  // Mean NDCG at ranks 1..L, L = database size - 1.
  std::vector<double> ndcg;
};

struct CurveBundle {
  std::vector<RunCurves> runs;
  std::size_t recall_levels = kDefaultRecallLevels;
};

// Averages per-query curves over the queries EvaluateRun would include.
RunCurves BuildRunCurves(const Run& run, const Classification& c,
                         std::size_t recall_levels = kDefaultRecallLevels,
                         const EvaluationOptions& options = {});

// Writes pr_<run>.csv (recall,precision) and ndcg_<run>.csv (rank,ndcg) per
// run plus manifest.json into `directory` (created if missing). Returns the
// written paths, manifest last.
std::vector<std::string> ExportCurves(const CurveBundle& bundle,
                                      const std::string& directory);

enum class CurveKind { kPrecisionRecall, kNdcg };

struct SvgOptions {
  int width = 640;
  int height = 480;
  std::string title;
  bool legend = true;
  CurveKind kind = CurveKind::kPrecisionRecall;
};

// Plot frame geometry shared by the renderer and its tests.
struct PlotArea {
  double left = 0;
  double top = 0;
  double width = 0;
  double height = 0;

  double X(double value) const { return left + value * width; }
  double Y(double value) const { return top + (1.0 - value) * height; }
};

PlotArea ComputePlotArea(const SvgOptions& options);

// Ten-colour palette; run i uses colour i % 10.
const std::vector<std::string>& SvgPalette();

// Standalone SVG 1.1 (svg, g, line, polyline, text, rect). Throws
// InputError for an empty bundle.
std::string RenderSvg(const CurveBundle& bundle, const SvgOptions& options = {});

}  // namespace shapeeval

#endif  // SHAPEEVAL_REPORT_HPP_
