#ifndef SHAPEEVAL_METRICS_HPP_
#define SHAPEEVAL_METRICS_HPP_

// Single-query retrieval measures over a binary gain vector. Ranks are
// 1-based in all comments; positions past the end of a ranking count as
// irrelevant. Every measure that divides by R throws UndefinedMeasure when
// R = 0.

#include <cstddef>
#include <vector>

#include "shapeeval/runs.hpp"

namespace shapeeval {

inline constexpr std::size_t kDefaultCutoff = 32;
inline constexpr std::size_t kDefaultRecallLevels = 20;

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
};

struct PrPoint {
  double recall = 0;
  double precision = 0;

  bool operator==(const PrPoint&) const = default;
};

struct PrCurve {
  // One point per relevant object retrieved: (j / R, j / rank).
  std::vector<PrPoint> raw_points;
  // Levels t / T for t = 0..T, precision = max raw precision at recall >= level.
  std::vector<PrPoint> interpolated;
};

struct DcgCurve {
  std::vector<double> cg;
  std::vector<double> dcg;
  std::vector<double> ideal_dcg;
  std::vector<double> ndcg;
};

struct TierScores {
  double nn = 0;
  double first_tier = 0;
  double second_tier = 0;
};

struct FMeasureParams {
  double alpha = 1.0;
  std::size_t cutoff = kDefaultCutoff;

  // Throws InputError unless alpha > 0 and cutoff >= 1.
  void Validate() const;
};

// Number of relevant objects in the top `k` ranks.
std::size_t HitsAt(const GainVector& g, std::size_t k);

// Precision is hits / k even when k exceeds the list length.
PrecisionRecall PrecisionRecallAt(const GainVector& g, std::size_t k);

PrCurve ComputePrCurve(const GainVector& g,
                       std::size_t levels = kDefaultRecallLevels);

double RPrecision(const GainVector& g);

// Mean precision at the rank of each relevant object; relevant objects that
// were never retrieved contribute 0.
double AveragePrecision(const GainVector& g);

// Weighted harmonic mean ((1 + a) P R) / (a P + R); 0 when P = R = 0.
double FMeasure(double precision, double recall, double alpha = 1.0);

// F at the cutoff rank. Higher is better; this is the value tabulated as
// "E-Measure".
double EMeasure(const GainVector& g, const FMeasureParams& params = {});

// 1 - F at the cutoff rank (the textbook complement).
double EMeasureComplement(const GainVector& g, const FMeasureParams& params = {});

// CG, DCG (log2 discount, rank 1 undiscounted), the ideal DCG for the same
// length and their ratio. Throws InputError on an empty vector.
DcgCurve ComputeDcgCurve(const GainVector& g);

// Normalized DCG at rank `database_size - 1` (the last rank a full ranking
// can reach), with both curves flat past their last relevant entry.
double DcgSummary(const GainVector& g, std::size_t database_size);

// Fraction of the R relevant objects inside the top 1, R and 2R ranks.
// nn is 1 or 0 (relevance of the first result).
TierScores ComputeTierScores(const GainVector& g);

}  // namespace shapeeval

#endif  // SHAPEEVAL_METRICS_HPP_
