#include "shapeeval/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <random>

#include "oracle.hpp"
#include "shapeeval/report.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

namespace shapeeval {
namespace {

using ::shapeeval::testing::DataPath;
using ::shapeeval::testing::PerfectMatrix;
using ::shapeeval::testing::SyntheticClassification;
using ::shapeeval::testing::SyntheticMatrix;

QueryScores QueryWithAp(const std::string& id, double ap) {
  QueryScores q;
  q.query = id;
  q.class_label = "only";
  for (Metric m : kAllMetrics) q.scores[m] = 1.0;
  q.scores[Metric::kMap] = ap;
  return q;
}

TEST(SummarizeQueries, MapIsMeanOfAp) {
  const double worked_ap = AveragePrecision({{1, 1, 0, 1, 0, 0, 1, 0, 0, 1}, 5});
  const RunSummary s =
      SummarizeQueries("r", {QueryWithAp("q1", worked_ap), QueryWithAp("q2", 1.0)});
  EXPECT_EQ(s.overall[Metric::kMap], (worked_ap + 1.0) / 2.0);
  EXPECT_NEAR(s.overall[Metric::kMap], 0.88215, 1e-4);
  EXPECT_EQ(s.query_count, 2u);
  EXPECT_THROW(SummarizeQueries("r", {}), EvaluationError);
}

// Classes of 33 give R = 32, so all relevant objects fit in the E cutoff.
TEST(EvaluateRun, PerfectRunScoresOne) {
  const Classification c = SyntheticClassification(3, 33);
  const RunSummary s = EvaluateRun(RankedListsFromMatrix(PerfectMatrix(c)), c);
  for (Metric m : kAllMetrics) EXPECT_EQ(s.overall[m], 1.0) << MetricKey(m);
  EXPECT_EQ(s.query_count, 99u);
  EXPECT_EQ(s.per_class.size(), 3u);
  for (const auto& [label, scores] : s.per_class) {
    for (Metric m : kAllMetrics) EXPECT_EQ(scores[m], 1.0);
  }
}

TEST(EvaluateRun, PerfectRunWithSmallClassesCapsEAtCutoff) {
  const Classification c = SyntheticClassification(5, 4);
  const RunSummary s = EvaluateRun(RankedListsFromMatrix(PerfectMatrix(c)), c);
  for (Metric m : kAllMetrics) {
    if (m == Metric::kEMeasure) continue;
    EXPECT_EQ(s.overall[m], 1.0) << MetricKey(m);
  }
  EXPECT_DOUBLE_EQ(s.overall[Metric::kEMeasure], oracle::F1(3.0 / 32.0, 1.0));
}

// Recomputes every measure for one query from its definition: relevant set
// A, prefix of the ranking, log2 discount.
MetricScores DefinitionalScores(const Classification& c, const RankedList& list) {
  const auto* cls = c.ClassOf(list.query);
  std::vector<ObjectId> relevant;
  for (const auto& m : cls->members) {
    if (m != list.query) relevant.push_back(m);
  }
  const double r = static_cast<double>(relevant.size());
  auto hits = [&](std::size_t k) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < std::min(k, list.ranking.size()); ++i) {
      h += std::count(relevant.begin(), relevant.end(), list.ranking[i]);
    }
    return static_cast<double>(h);
  };
  MetricScores s;
  s[Metric::kNearestNeighbor] = hits(1);
  s[Metric::kFirstTier] = hits(relevant.size()) / r;
  s[Metric::kSecondTier] = hits(2 * relevant.size()) / r;
  s[Metric::kEMeasure] = oracle::F1(hits(32) / 32.0, hits(32) / r);
  double ap = 0, dcg = 0, ideal = 0;
  for (std::size_t i = 0; i < list.ranking.size(); ++i) {
    if (std::count(relevant.begin(), relevant.end(), list.ranking[i])) {
      ap += hits(i + 1) / static_cast<double>(i + 1);
      dcg += i == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(i + 1));
    }
  }
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    ideal += i == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(i + 1));
  }
  s[Metric::kMap] = ap / r;
  s[Metric::kDcg] = dcg / ideal;
  return s;
}

TEST(EvaluateRun, AscendingIdRunMatchesDefinitionalOracle) {
  const Classification c = SyntheticClassification(2, 3);
  shapeeval::Run run;
  run.name = "by_id";
  const auto ids = c.Objects();
  for (const auto& q : ids) {
    RankedList list{q, {}, {}};
    for (const auto& o : ids) {
      if (o != q) list.ranking.push_back(o);
    }
    run.lists.emplace(q, list);
  }
  const RunSummary s = EvaluateRun(run, c);
  ASSERT_EQ(s.per_query.size(), 6u);
  std::array<double, kMetricCount> sums{};
  for (const auto& q : s.per_query) {
    const MetricScores expected = DefinitionalScores(c, run.lists.at(q.query));
    for (Metric m : kAllMetrics) {
      EXPECT_TRUE(oracle::RelClose(q.scores[m], expected[m], 1e-12))
          << q.query << " " << MetricKey(m);
      sums[static_cast<std::size_t>(m)] += expected[m];
    }
  }
  for (Metric m : kAllMetrics) {
    EXPECT_TRUE(oracle::RelClose(s.overall[m], sums[static_cast<std::size_t>(m)] / 6.0,
                                 1e-12));
  }
}

TEST(EvaluateRun, AggregateIsMeanOfReportedPerQueryValues) {
  const Classification c = SyntheticClassification(6, 5);
  std::mt19937_64 rng(1);
  const RunSummary s = EvaluateRun(
      RankedListsFromMatrix(SyntheticMatrix(c, rng, [](std::size_t) { return 0.3; })),
      c);
  for (Metric m : kAllMetrics) {
    double sum = 0;
    for (const auto& q : s.per_query) sum += q.scores[m];
    EXPECT_EQ(s.overall[m], sum / static_cast<double>(s.per_query.size()));
    EXPECT_GE(s.overall[m], 0.0);
    EXPECT_LE(s.overall[m], 1.0);
  }
}

TEST(EvaluateRun, ToyFixtureMatchesOracleFile) {
  const Classification c = LoadClassification(DataPath("toy_classification.txt"));
  const std::string text = testing::Slurp(DataPath("toy_expected.csv"));
  std::map<std::pair<std::string, std::string>, std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    std::vector<double> values;
    for (std::size_t k = 2; k < cells.size(); ++k) values.push_back(std::stod(cells[k]));
    rows[{cells[0], cells[1]}] = values;
  }
  for (const char* file : {"toy_run_a.txt", "toy_run_b.txt"}) {
    const RunSummary s = EvaluateRun(LoadRun(DataPath(file)), c);
    for (const auto& q : s.per_query) {
      const auto& want = rows.at({s.run_name, q.query});
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        EXPECT_TRUE(oracle::RelClose(q.scores.values[k], want[k], 1e-12))
            << s.run_name << " " << q.query << " col " << k;
      }
    }
    const auto& want = rows.at({s.run_name, "*"});
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      EXPECT_TRUE(oracle::RelClose(s.overall.values[k], want[k], 1e-12));
    }
  }
}

TEST(EvaluateRun, MissingAndExcludedQueries) {
  const Classification c = LoadClassification(DataPath("singleton.txt"));
  shapeeval::Run run;
  run.name = "partial";
  run.lists["a1"] = {"a1", {"a2", "a3", "b1"}, {}};
  Diagnostics warnings;
  const RunSummary s = EvaluateRun(run, c, {}, &warnings);
  EXPECT_EQ(s.excluded_queries, std::vector<ObjectId>{"s1"});
  EXPECT_EQ(s.query_count, 5u);
  // Five missing rankings plus the exclusion of s1.
  EXPECT_EQ(warnings.size(), 6u);
  const auto& a2 = *std::find_if(s.per_query.begin(), s.per_query.end(),
                                 [](const QueryScores& q) { return q.query == "a2"; });
  for (Metric m : kAllMetrics) EXPECT_EQ(a2.scores[m], 0.0);
}

TEST(EvaluateRun, Errors) {
  const Classification c = SyntheticClassification(2, 3);
  shapeeval::Run run;
  run.lists["stranger"] = {"stranger", {"c00_00"}, {}};
  EXPECT_THROW(EvaluateRun(run, c), InputError);

  shapeeval::Run unknown;
  unknown.lists["c00_00"] = {"c00_00", {"ghost", "c00_01"}, {}};
  EvaluationOptions strict;
  strict.unknown_objects = UnknownObjectPolicy::kError;
  EXPECT_THROW(EvaluateRun(unknown, c, strict), InputError);
  EXPECT_NO_THROW(EvaluateRun(unknown, c));

  Classification singletons;
  singletons.Add("a", "A");
  singletons.Add("b", "B");
  EXPECT_THROW(EvaluateRun(shapeeval::Run{}, singletons), EvaluationError);
}

TEST(EvaluateRun, ParallelMatchesSerial) {
  const Classification c = SyntheticClassification(8, 6);
  std::mt19937_64 rng(9);
  const auto run =
      RankedListsFromMatrix(SyntheticMatrix(c, rng, [](std::size_t) { return 0.2; }));
  EvaluationOptions serial, parallel;
  parallel.threads = 4;
  const RunSummary a = EvaluateRun(run, c, serial);
  const RunSummary b = EvaluateRun(run, c, parallel);
  EXPECT_EQ(RenderPerQueryCsv(a), RenderPerQueryCsv(b));
  EXPECT_EQ(a.overall.values, b.overall.values);
}

TEST(EvaluateRun, ScaleInvarianceOfMatrices) {
  const Classification c = SyntheticClassification(4, 5);
  std::mt19937_64 rng(10);
  const DissimilarityMatrix m =
      SyntheticMatrix(c, rng, [](std::size_t i) { return 0.1 * (i % 4); });
  std::vector<double> scaled = m.values();
  for (auto& v : scaled) v *= 4.0;
  const RunSummary a = EvaluateRun(RankedListsFromMatrix(m), c);
  const RunSummary b =
      EvaluateRun(RankedListsFromMatrix(DissimilarityMatrix(m.ids(), scaled)), c);
  EXPECT_EQ(RenderPerQueryCsv(a), RenderPerQueryCsv(b));
}

TEST(CompareRuns, SelfComparison) {
  const Classification c = SyntheticClassification(4, 5);
  std::mt19937_64 rng(2);
  const auto run =
      RankedListsFromMatrix(SyntheticMatrix(c, rng, [](std::size_t) { return 0.4; }));
  const RunSummary s = EvaluateRun(run, c);
  const ComparisonReport r = CompareRuns(s, s);
  EXPECT_EQ(r.query_count, 20u);
  for (Metric m : kAllMetrics) {
    EXPECT_EQ(r.per_metric_delta.at(m).delta, 0.0);
    const WinCounts& w = r.per_query_wins.at(m);
    EXPECT_EQ(w.ties, 20u);
    EXPECT_EQ(w.wins_a + w.wins_b + w.ties, r.query_count);
  }
}

TEST(CompareRuns, DominatingRunWinsEveryQuery) {
  const Classification c = SyntheticClassification(4, 5);
  // b is perfect; a ranks the first irrelevant object ahead of everything.
  const shapeeval::Run perfect = RankedListsFromMatrix(PerfectMatrix(c));
  shapeeval::Run worse = perfect;
  for (auto& [q, list] : worse.lists) {
    auto it = std::find_if(list.ranking.begin(), list.ranking.end(), [&](const auto& o) {
      return c.ClassOf(o) != c.ClassOf(q);
    });
    std::rotate(list.ranking.begin(), it, it + 1);
    list.scores.clear();
  }
  const ComparisonReport r = CompareRuns(EvaluateRun(worse, c), EvaluateRun(perfect, c));
  EXPECT_EQ(r.per_query_wins.at(Metric::kMap).wins_b, 20u);
  EXPECT_EQ(r.per_query_wins.at(Metric::kNearestNeighbor).wins_b, 20u);
  EXPECT_GT(r.per_metric_delta.at(Metric::kMap).delta, 0.0);
}

TEST(CompareRuns, StoredTableValues) {
  const auto rows = ParseSummaryCsv(testing::Slurp(DataPath("table2.csv")), "table2");
  const RunSummary& bf = rows[0];
  const RunSummary& vlgd = rows[6];
  ASSERT_EQ(bf.run_name, "BF-DSIFT-E");
  ASSERT_EQ(vlgd.run_name, "VLGD+MMR");
  const ComparisonReport r = CompareRuns(bf, vlgd);
  EXPECT_NEAR(r.per_metric_delta.at(Metric::kDcg).delta, 0.039, 1e-12);
  EXPECT_EQ(r.per_metric_delta.count(Metric::kMap), 0u);  // not reported
  EXPECT_TRUE(r.per_query_wins.empty());
}

TEST(CompareRuns, MismatchedQuerySets) {
  const RunSummary a = SummarizeQueries("a", {QueryWithAp("q1", 1), QueryWithAp("q2", 1)});
  const RunSummary b = SummarizeQueries("b", {QueryWithAp("q1", 1), QueryWithAp("q3", 1)});
  const RunSummary c = SummarizeQueries("c", {QueryWithAp("q1", 1)});
  EXPECT_THROW(CompareRuns(a, b), InputError);
  EXPECT_THROW(CompareRuns(a, c), InputError);
}

TEST(ReliabilitySwapRate, IdenticalRunsNeverSwap) {
  const Classification c = SyntheticClassification(12, 4);
  std::mt19937_64 rng(3);
  const auto run =
      RankedListsFromMatrix(SyntheticMatrix(c, rng, [](std::size_t) { return 0.2; }));
  const auto est = ReliabilitySwapRate(run, run, c, Metric::kMap, {2, 4, 6}, 200, 1);
  for (auto s : {2u, 4u, 6u}) EXPECT_EQ(est.swap_rate.at(s), 0.0);
}

TEST(ReliabilitySwapRate, UniformlyBetterRunNeverSwaps) {
  const Classification c = SyntheticClassification(12, 4);
  std::mt19937_64 rng(4);
  const auto weak =
      RankedListsFromMatrix(SyntheticMatrix(c, rng, [](std::size_t) { return 0.0; }));
  // Every per-query AP of the perfect run is 1 and the weak run is < 1 on
  // every query with overwhelming probability; check that first.
  const RunSummary sw = EvaluateRun(weak, c);
  for (const auto& q : sw.per_query) ASSERT_LT(q.scores[Metric::kMap], 1.0);
  const auto perfect = RankedListsFromMatrix(PerfectMatrix(c));
  const auto est = ReliabilitySwapRate(perfect, weak, c, Metric::kMap, {2, 3, 5}, 300, 9);
  for (const auto& [size, rate] : est.swap_rate) EXPECT_EQ(rate, 0.0) << size;
}

TEST(ReliabilitySwapRate, ReproducibleAndThreadIndependent) {
  const Classification c = SyntheticClassification(16, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  const auto a = RankedListsFromMatrix(SyntheticMatrix(c, rng, [&](std::size_t) { return u(rng); }));
  const auto b = RankedListsFromMatrix(SyntheticMatrix(c, rng, [&](std::size_t) { return u(rng); }));
  const RunSummary sa = EvaluateRun(a, c), sb = EvaluateRun(b, c);
  const auto e1 = ReliabilitySwapRate(sa, sb, Metric::kDcg, {2, 4, 8}, 500, 77, 1);
  const auto e2 = ReliabilitySwapRate(sa, sb, Metric::kDcg, {2, 4, 8}, 500, 77, 4);
  EXPECT_EQ(e1.swap_rate, e2.swap_rate);
  const auto e3 = ReliabilitySwapRate(sa, sb, Metric::kDcg, {2, 4, 8}, 500, 78, 1);
  EXPECT_NE(e1.swap_rate, e3.swap_rate);
  for (const auto& [size, rate] : e1.swap_rate) {
    EXPECT_GE(rate, 0.0);
    EXPECT_LE(rate, 1.0);
  }
}

TEST(ReliabilitySwapRate, Preconditions) {
  const Classification c = SyntheticClassification(6, 3);
  const auto run = RankedListsFromMatrix(PerfectMatrix(c));
  EXPECT_THROW(ReliabilitySwapRate(run, run, c, Metric::kMap, {4}, 10, 0), InputError);
  EXPECT_THROW(ReliabilitySwapRate(run, run, c, Metric::kMap, {1}, 10, 0), InputError);
  EXPECT_THROW(ReliabilitySwapRate(run, run, c, Metric::kMap, {2}, 0, 0), InputError);
  EXPECT_THROW(ReliabilitySwapRate(run, run, c, Metric::kMap, {}, 10, 0), InputError);
  EXPECT_NO_THROW(ReliabilitySwapRate(run, run, c, Metric::kMap, {3}, 10, 0));
}

TEST(Metric, NamesRoundTrip) {
  for (Metric m : kAllMetrics) {
    EXPECT_EQ(ParseMetric(MetricKey(m)), m);
    EXPECT_EQ(ParseMetric(MetricHeading(m)), m);
  }
  EXPECT_EQ(ParseMetric("Tier1"), Metric::kFirstTier);
  EXPECT_THROW(ParseMetric("auc"), InputError);
}

}  // namespace
}  // namespace shapeeval
