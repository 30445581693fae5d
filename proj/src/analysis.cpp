#include "shapeeval/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>

#include "parallel.hpp"

namespace shapeeval {

std::string_view MetricKey(Metric m) {
  static constexpr std::array<std::string_view, kMetricCount> kKeys = {
      "nn", "ft", "st", "e", "dcg", "map"};
  return kKeys[static_cast<std::size_t>(m)];
}

std::string_view MetricHeading(Metric m) {
  static constexpr std::array<std::string_view, kMetricCount> kHeadings = {
      "NN", "Tier1", "Tier2", "E-Measure", "DCG", "MAP"};
  return kHeadings[static_cast<std::size_t>(m)];
}

Metric ParseMetric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (Metric m : kAllMetrics) {
    std::string heading(MetricHeading(m));
    std::transform(heading.begin(), heading.end(), heading.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (lower == MetricKey(m) || lower == heading) return m;
  }
  if (lower == "tier1" || lower == "first_tier") return Metric::kFirstTier;
  if (lower == "tier2" || lower == "second_tier") return Metric::kSecondTier;
  if (lower == "e-measure" || lower == "emeasure") return Metric::kEMeasure;
  if (lower == "ap" || lower == "ndcg") {
    return lower == "ap" ? Metric::kMap : Metric::kDcg;
  }
  throw InputError(fmt::format("unknown metric '{}' (expected one of nn, ft, "
                               "st, e, dcg, map)",
                               name));
}

bool MetricScores::has(Metric m) const { return !std::isnan((*this)[m]); }

namespace {

struct Accumulator {
  std::array<double, kMetricCount> sum{};
  std::size_t count = 0;

  void Add(const MetricScores& s) {
    for (std::size_t i = 0; i < kMetricCount; ++i) sum[i] += s.values[i];
    ++count;
  }
  MetricScores Mean() const {
    MetricScores out;
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      out.values[i] = sum[i] / static_cast<double>(count);
    }
    return out;
  }
};

struct QuerySlot {
  std::optional<QueryScores> scores;
  Diagnostics warnings;
  bool excluded = false;
};

}  // namespace

RunSummary EvaluateRun(const Run& run, const Classification& c,
                       const EvaluationOptions& options,
                       Diagnostics* warnings) {
  options.f_params.Validate();
  for (const auto& [query, list] : run.lists) {
    if (!c.Contains(query)) {
      throw InputError(fmt::format("run '{}' has query '{}' which is not in the "
                                   "classification",
                                   run.name, query));
    }
  }
  const std::vector<ObjectId> queries = c.Objects();
  const std::size_t database_size = c.object_count();
  std::vector<QuerySlot> slots(queries.size());

  internal::ParallelFor(queries.size(), options.threads, [&](std::size_t i) {
    QuerySlot& slot = slots[i];
    const ObjectId& query = queries[i];
    RankedList empty{query, {}, {}};
    const RankedList* list = &empty;
    if (auto it = run.lists.find(query); it != run.lists.end()) {
      list = &it->second;
    } else {
      Warn(&slot.warnings, fmt::format("run '{}' has no ranking for query '{}'; "
                                       "scored as empty",
                                       run.name, query));
    }
    const GainVector g =
        MakeGainVector(*list, c, options.unknown_objects, &slot.warnings);
    if (g.relevant_total == 0) {
      slot.excluded = true;
      Warn(&slot.warnings, fmt::format("query '{}' has no relevant objects; "
                                       "excluded from aggregates",
                                       query));
      return;
    }
    QueryScores qs;
    qs.query = query;
    qs.class_label = c.ClassOf(query)->label;
    const TierScores tiers = ComputeTierScores(g);
    qs.scores[Metric::kNearestNeighbor] = tiers.nn;
    qs.scores[Metric::kFirstTier] = tiers.first_tier;
    qs.scores[Metric::kSecondTier] = tiers.second_tier;
    qs.scores[Metric::kEMeasure] = EMeasure(g, options.f_params);
    qs.scores[Metric::kDcg] = DcgSummary(g, database_size);
    qs.scores[Metric::kMap] = AveragePrecision(g);
    slot.scores = std::move(qs);
  });

  std::vector<QueryScores> per_query;
  std::vector<ObjectId> excluded;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    QuerySlot& slot = slots[i];
    if (warnings != nullptr) {
      warnings->insert(warnings->end(), slot.warnings.begin(),
                       slot.warnings.end());
    }
    if (slot.excluded) {
      excluded.push_back(queries[i]);
    } else {
      per_query.push_back(std::move(*slot.scores));
    }
  }
  if (per_query.empty()) {
    throw EvaluationError(fmt::format("run '{}' has no evaluable query (every "
                                      "class has a single member)",
                                      run.name));
  }
  RunSummary summary =
      SummarizeQueries(run.name, std::move(per_query), std::move(excluded));
  summary.method_label = run.method_label;
  summary.meta = run.meta;
  return summary;
}

RunSummary SummarizeQueries(std::string run_name,
                            std::vector<QueryScores> per_query,
                            std::vector<ObjectId> excluded_queries) {
  if (per_query.empty()) {
    throw EvaluationError(fmt::format("run '{}' has no evaluable query", run_name));
  }
  Accumulator overall;
  std::map<ClassLabel, Accumulator> per_class;
  for (const auto& q : per_query) {
    overall.Add(q.scores);
    per_class[q.class_label].Add(q.scores);
  }
  RunSummary summary;
  summary.run_name = std::move(run_name);
  summary.query_count = overall.count;
  summary.overall = overall.Mean();
  for (const auto& [label, acc] : per_class) {
    summary.per_class.emplace(label, acc.Mean());
  }
  summary.per_query = std::move(per_query);
  summary.excluded_queries = std::move(excluded_queries);
  return summary;
}

ComparisonReport CompareRuns(const RunSummary& a, const RunSummary& b) {
  ComparisonReport report;
  report.run_a = a.run_name;
  report.run_b = b.run_name;
  for (Metric m : kAllMetrics) {
    if (!a.overall.has(m) || !b.overall.has(m)) continue;
    report.per_metric_delta[m] = {a.overall[m], b.overall[m],
                                  b.overall[m] - a.overall[m]};
  }
  if (a.per_query.empty() || b.per_query.empty()) {
    if (!a.per_query.empty() || !b.per_query.empty()) {
      throw InputError(fmt::format("cannot compare '{}' and '{}': only one has "
                                   "per-query values",
                                   a.run_name, b.run_name));
    }
    return report;
  }
  if (a.per_query.size() != b.per_query.size()) {
    throw InputError(fmt::format("'{}' and '{}' were evaluated on different "
                                 "query sets ({} vs {} queries)",
                                 a.run_name, b.run_name, a.per_query.size(),
                                 b.per_query.size()));
  }
  std::map<std::string_view, const QueryScores*> b_index;
  for (const auto& q : b.per_query) b_index.emplace(q.query, &q);
  for (Metric m : kAllMetrics) report.per_query_wins[m] = {};
  for (const auto& qa : a.per_query) {
    auto it = b_index.find(qa.query);
    if (it == b_index.end()) {
      throw InputError(fmt::format("query '{}' was evaluated for '{}' but not "
                                   "for '{}'",
                                   qa.query, a.run_name, b.run_name));
    }
    const QueryScores& qb = *it->second;
    for (Metric m : kAllMetrics) {
      const double diff = qa.scores[m] - qb.scores[m];
      WinCounts& w = report.per_query_wins[m];
      if (diff > kTieTolerance) {
        ++w.wins_a;
      } else if (diff < -kTieTolerance) {
        ++w.wins_b;
      } else {
        ++w.ties;
      }
    }
  }
  report.query_count = a.per_query.size();
  return report;
}

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, bound) by rejection; portable across standard
// libraries, unlike std::uniform_int_distribution.
std::uint64_t Below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// First `count` entries of a Fisher-Yates shuffle of [0, n).
void PartialShuffle(std::vector<std::size_t>& items, std::size_t count,
                    std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + Below(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

struct ClassTotals {
  double sum_a = 0;
  double sum_b = 0;
  std::size_t count = 0;
};

int Winner(double mean_a, double mean_b) {
  const double diff = mean_a - mean_b;
  if (diff > kTieTolerance) return 1;
  if (diff < -kTieTolerance) return -1;
  return 0;
}

}  // namespace

ReliabilityEstimate ReliabilitySwapRate(const RunSummary& a,
                                        const RunSummary& b, Metric metric,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t trials, std::uint64_t seed,
                                        std::size_t threads) {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (sizes.empty()) throw InputError("no subset sizes given");
  if (a.per_query.empty() || b.per_query.empty()) {
    throw InputError("reliability needs per-query values for both runs");
  }
  // Validates matching query sets.
  (void)CompareRuns(a, b);

  std::map<std::string_view, const QueryScores*> b_index;
  for (const auto& q : b.per_query) b_index.emplace(q.query, &q);
  std::map<std::string_view, ClassTotals> by_label;
  for (const auto& qa : a.per_query) {
    ClassTotals& t = by_label[qa.class_label];
    t.sum_a += qa.scores[metric];
    t.sum_b += b_index.at(qa.query)->scores[metric];
    ++t.count;
  }
  std::vector<ClassTotals> classes;
  classes.reserve(by_label.size());
  for (const auto& [label, totals] : by_label) classes.push_back(totals);

  const std::size_t max_size = *std::max_element(sizes.begin(), sizes.end());
  for (std::size_t s : sizes) {
    if (s < 2) {
      throw InputError(fmt::format("subset size {} is below the minimum of 2", s));
    }
  }
  if (2 * max_size > classes.size()) {
    throw InputError(fmt::format(
        "subset size {} needs {} classes for two disjoint subsets, but only {} "
        "classes have evaluable queries",
        max_size, 2 * max_size, classes.size()));
  }

  ReliabilityEstimate estimate;
  estimate.metric = metric;
  estimate.subset_sizes = sizes;
  estimate.trials = trials;
  estimate.seed = seed;
  estimate.class_count = classes.size();

  auto subset_winner = [&](const std::vector<std::size_t>& order,
                           std::size_t begin, std::size_t end) {
    double sum_a = 0, sum_b = 0;
    std::size_t count = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const ClassTotals& t = classes[order[k]];
      sum_a += t.sum_a;
      sum_b += t.sum_b;
      count += t.count;
    }
    const double n = static_cast<double>(count);
    return Winner(sum_a / n, sum_b / n);
  };

  for (std::size_t size_index = 0; size_index < sizes.size(); ++size_index) {
    const std::size_t s = sizes[size_index];
    std::vector<std::uint8_t> swapped(trials, 0);
    internal::ParallelFor(trials, threads, [&](std::size_t trial) {
      std::uint64_t trial_seed = SplitMix64(seed);
      trial_seed = SplitMix64(trial_seed ^ static_cast<std::uint64_t>(s));
      trial_seed = SplitMix64(trial_seed ^ static_cast<std::uint64_t>(trial));
      std::mt19937_64 rng(trial_seed);
      std::vector<std::size_t> order(classes.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      PartialShuffle(order, 2 * s, rng);
      const int first = subset_winner(order, 0, s);
      const int second = subset_winner(order, s, 2 * s);
      swapped[trial] = first != 0 && second != 0 && first != second;
    });
    std::size_t swaps = 0;
    for (auto v : swapped) swaps += v;
    estimate.swap_rate[s] =
        static_cast<double>(swaps) / static_cast<double>(trials);
  }
  return estimate;
}

ReliabilityEstimate ReliabilitySwapRate(const Run& a, const Run& b,
                                        const Classification& c, Metric metric,
                                        const std::vector<std::size_t>& sizes,
                                        std::size_t trials, std::uint64_t seed,
                                        const EvaluationOptions& options) {
  const RunSummary sa = EvaluateRun(a, c, options);
  const RunSummary sb = EvaluateRun(b, c, options);
  return ReliabilitySwapRate(sa, sb, metric, sizes, trials, seed,
                             options.threads);
}

}  // namespace shapeeval
