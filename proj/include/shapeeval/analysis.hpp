#ifndef SHAPEEVAL_ANALYSIS_HPP_
#define SHAPEEVAL_ANALYSIS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapeeval/dataset.hpp"
#include "shapeeval/metrics.hpp"
#include "shapeeval/runs.hpp"

namespace shapeeval {

// Run-level measures in summary-table column order.
enum class Metric : std::size_t {
  kNearestNeighbor = 0,
  kFirstTier,
  kSecondTier,
  kEMeasure,
  kDcg,
  kMap,
};

inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kNearestNeighbor, Metric::kFirstTier, Metric::kSecondTier,
    Metric::kEMeasure,        Metric::kDcg,       Metric::kMap};

// Short machine name: nn, ft, st, e, dcg, map.
std::string_view MetricKey(Metric m);
// Column heading: NN, Tier1, Tier2, E-Measure, DCG, MAP.
std::string_view MetricHeading(Metric m);
// Accepts the key or heading (case-insensitive) plus FT/ST/E aliases.
Metric ParseMetric(std::string_view name);

// Six scores; NaN marks a value that was not reported (stored tables).
struct MetricScores {
  std::array<double, kMetricCount> values{
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN()};

  double& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }
  double operator[](Metric m) const {
    return values[static_cast<std::size_t>(m)];
  }
  bool has(Metric m) const;
};

struct QueryScores {
  ObjectId query;
  ClassLabel class_label;
  MetricScores scores;  // MAP slot holds the query's AP
};

struct RunSummary {
  std::string run_name;
  std::string method_label;
  RunMeta meta;
  MetricScores overall;
  std::map<ClassLabel, MetricScores> per_class;
  std::size_t query_count = 0;  // included queries
  std::vector<ObjectId> excluded_queries;  // R = 0
  std::vector<QueryScores> per_query;  // classification order; empty if stored
};

// Means of per-query values, overall and per class. Throws EvaluationError
// when `per_query` is empty.
RunSummary SummarizeQueries(std::string run_name,
                            std::vector<QueryScores> per_query,
                            std::vector<ObjectId> excluded_queries = {});

struct EvaluationOptions {
  FMeasureParams f_params;
  UnknownObjectPolicy unknown_objects = UnknownObjectPolicy::kWarn;
  // Worker threads for per-query scoring; 0 picks hardware concurrency.
  std::size_t threads = 1;
};

// Scores every classified object as a query. Queries missing from the run
// are scored as empty rankings (with a warning); queries with R = 0 are
// excluded. Throws InputError if a run query is unclassified and
// EvaluationError if no query is evaluable.
RunSummary EvaluateRun(const Run& run, const Classification& c,
                       const EvaluationOptions& options = {},
                       Diagnostics* warnings = nullptr);

struct MetricDelta {
  double a = 0;
  double b = 0;
  double delta = 0;  // b - a
};

struct WinCounts {
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t ties = 0;
};

struct ComparisonReport {
  std::string run_a;
  std::string run_b;
  std::map<Metric, MetricDelta> per_metric_delta;
  std::map<Metric, WinCounts> per_query_wins;  // empty for stored summaries
  std::size_t query_count = 0;
};

inline constexpr double kTieTolerance = 1e-12;

// Deltas for every metric both summaries report. Per-query wins are counted
// when both carry per-query values, which must then cover the same queries.
ComparisonReport CompareRuns(const RunSummary& a, const RunSummary& b);

struct ReliabilityEstimate {
  Metric metric = Metric::kMap;
  std::vector<std::size_t> subset_sizes;
  std::map<std::size_t, double> swap_rate;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t class_count = 0;  // classes with at least one evaluable query
};

// Disjoint class-subset resampling. For each size s and trial, two disjoint
// random sets of s classes are drawn; each set picks a winner by the mean
// per-query value of `metric` over its queries. Disagreement is a swap; a
// tie on either side counts as agreement.
ReliabilityEstimate ReliabilitySwapRate(const RunSummary& a,
                                        const RunSummary& b, Metric metric,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t threads = 1);

ReliabilityEstimate ReliabilitySwapRate(const Run& a, const Run& b,
                                        const Classification& c, Metric metric,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t trials, std::uint64_t seed,
                                        const EvaluationOptions& options = {});

}  // namespace shapeeval

#endif  // SHAPEEVAL_ANALYSIS_HPP_
