#include "shapeeval/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace shapeeval {

namespace {

void RequireRelevant(const GainVector& g, const char* measure) {
  if (g.relevant_total == 0) {
    throw UndefinedMeasure(
        fmt::format("{} is undefined for a query with no relevant objects",
                    measure));
  }
}

}  // namespace

void FMeasureParams::Validate() const {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw InputError(fmt::format("F-measure weight must be > 0, got {}", alpha));
  }
  if (cutoff < 1) throw InputError("cutoff must be >= 1");
}

std::size_t HitsAt(const GainVector& g, std::size_t k) {
  const std::size_t n = std::min(k, g.gains.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += g.gains[i];
  return hits;
}

PrecisionRecall PrecisionRecallAt(const GainVector& g, std::size_t k) {
  if (k < 1) throw InputError("rank k must be >= 1");
  RequireRelevant(g, "recall");
  const double hits = static_cast<double>(HitsAt(g, k));
  return {hits / static_cast<double>(k),
          hits / static_cast<double>(g.relevant_total)};
}

PrCurve ComputePrCurve(const GainVector& g, std::size_t levels) {
  RequireRelevant(g, "precision-recall curve");
  if (levels < 1) throw InputError("recall levels must be >= 1");
  PrCurve curve;
  const double r = static_cast<double>(g.relevant_total);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < g.gains.size(); ++i) {
    if (!g.gains[i]) continue;
    ++hits;
    curve.raw_points.push_back(
        {static_cast<double>(hits) / r,
         static_cast<double>(hits) / static_cast<double>(i + 1)});
  }

  // Running max from the right gives max precision over recall >= level.
  std::vector<double> suffix_max(curve.raw_points.size() + 1, 0.0);
  for (std::size_t j = curve.raw_points.size(); j-- > 0;) {
    suffix_max[j] = std::max(suffix_max[j + 1], curve.raw_points[j].precision);
  }
  curve.interpolated.reserve(levels + 1);
  std::size_t first = 0;
  for (std::size_t t = 0; t <= levels; ++t) {
    const double level = static_cast<double>(t) / static_cast<double>(levels);
    // Recall j / R >= t / T  <=>  j * T >= t * R, evaluated exactly.
    while (first < curve.raw_points.size() &&
           (first + 1) * levels < t * g.relevant_total) {
      ++first;
    }
    curve.interpolated.push_back({level, suffix_max[first]});
  }
  return curve;
}

double RPrecision(const GainVector& g) {
  RequireRelevant(g, "R-precision");
  return static_cast<double>(HitsAt(g, g.relevant_total)) /
         static_cast<double>(g.relevant_total);
}

double AveragePrecision(const GainVector& g) {
  RequireRelevant(g, "average precision");
  double sum = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < g.gains.size(); ++i) {
    if (!g.gains[i]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(g.relevant_total);
}

double FMeasure(double precision, double recall, double alpha) {
  const double denom = alpha * precision + recall;
  if (denom == 0) return 0;
  return ((1 + alpha) * precision * recall) / denom;
}

double EMeasure(const GainVector& g, const FMeasureParams& params) {
  params.Validate();
  const PrecisionRecall pr = PrecisionRecallAt(g, params.cutoff);
  return FMeasure(pr.precision, pr.recall, params.alpha);
}

double EMeasureComplement(const GainVector& g, const FMeasureParams& params) {
  return 1.0 - EMeasure(g, params);
}

DcgCurve ComputeDcgCurve(const GainVector& g) {
  if (g.gains.empty()) throw InputError("DCG of an empty gain vector");
  const std::size_t n = g.gains.size();
  DcgCurve c;
  c.cg.resize(n);
  c.dcg.resize(n);
  c.ideal_dcg.resize(n);
  c.ndcg.resize(n);
  const std::size_t ideal_ones = std::min(g.relevant_total, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gain = g.gains[i];
    const double ideal_gain = i < ideal_ones ? 1.0 : 0.0;
    if (i == 0) {
      c.cg[0] = gain;
      c.dcg[0] = gain;
      c.ideal_dcg[0] = ideal_gain;
    } else {
      const double discount = std::log2(static_cast<double>(i + 1));
      c.cg[i] = c.cg[i - 1] + gain;
      c.dcg[i] = c.dcg[i - 1] + gain / discount;
      c.ideal_dcg[i] = c.ideal_dcg[i - 1] + ideal_gain / discount;
    }
    c.ndcg[i] = c.ideal_dcg[i] == 0 ? 1.0 : c.dcg[i] / c.ideal_dcg[i];
  }
  return c;
}

double DcgSummary(const GainVector& g, std::size_t database_size) {
  RequireRelevant(g, "DCG");
  if (database_size < 2) throw InputError("database size must be >= 2");
  const std::size_t last_rank = std::max(database_size - 1, g.gains.size());
  double dcg = 0;
  for (std::size_t i = 0; i < g.gains.size(); ++i) {
    if (!g.gains[i]) continue;
    dcg += i == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(i + 1));
  }
  double ideal = 0;
  const std::size_t ideal_ones = std::min(g.relevant_total, last_rank);
  for (std::size_t i = 0; i < ideal_ones; ++i) {
    ideal += i == 0 ? 1.0 : 1.0 / std::log2(static_cast<double>(i + 1));
  }
  return dcg / ideal;
}

TierScores ComputeTierScores(const GainVector& g) {
  RequireRelevant(g, "tier scores");
  const double r = static_cast<double>(g.relevant_total);
  TierScores t;
  t.nn = !g.gains.empty() && g.gains[0] ? 1.0 : 0.0;
  t.first_tier = static_cast<double>(HitsAt(g, g.relevant_total)) / r;
  t.second_tier = static_cast<double>(HitsAt(g, 2 * g.relevant_total)) / r;
  return t;
}

}  // namespace shapeeval
