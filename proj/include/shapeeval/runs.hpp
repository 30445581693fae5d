#ifndef SHAPEEVAL_RUNS_HPP_
#define SHAPEEVAL_RUNS_HPP_

// Retrieval runs: one ranked list per query, read either from a run file or
// derived from a dissimilarity matrix.
//
// Run file: one `query_id object_id score` triple per line, lower score is a
// better match. Within a query, results are ordered by (score, object_id)
// ascending. '#' starts a comment; the directives
//   # name: <text>
//   # method: <text>
//   # query_time_ms: <number>
//   # descriptor_bytes: <integer>
// set run metadata.
//
// Matrix file (text): `N`, then N id tokens, then N rows of N numbers, all
// whitespace separated. Matrix file (CSV): header row `,id1,...,idN`, then
// one row per id `idI,v1,...,vN` with rows in header order. values[i][j] is
// the dissimilarity of object j to query i.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapeeval/dataset.hpp"
#include "shapeeval/error.hpp"

namespace shapeeval {

struct RankedList {
  ObjectId query;
  std::vector<ObjectId> ranking;  // rank 1 first
  // Dissimilarity per ranked object when known; empty otherwise.
  std::vector<double> scores;

  bool operator==(const RankedList&) const = default;
};

struct RunMeta {
  std::optional<double> reported_query_time_ms;
  std::optional<std::int64_t> descriptor_bytes;

  bool operator==(const RunMeta&) const = default;
};

struct Run {
  std::string name;
  std::string method_label;
  std::map<ObjectId, RankedList> lists;  // keyed by query
  RunMeta meta;

  bool operator==(const Run&) const = default;
};

class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  // `values` is row-major, size ids.size()^2. Checks shape and id
  // uniqueness; value checks happen in Validate().
  DissimilarityMatrix(std::vector<ObjectId> ids, std::vector<double> values);

  std::size_t size() const { return ids_.size(); }
  const std::vector<ObjectId>& ids() const { return ids_; }
  const std::vector<double>& values() const { return values_; }
  double at(std::size_t row, std::size_t col) const {
    return values_[row * ids_.size() + col];
  }

  // Throws InputError naming the first non-finite or negative entry.
  void Validate() const;

 private:
  std::vector<ObjectId> ids_;
  std::vector<double> values_;
};

// Binary relevance of each ranked object plus the query's relevant total R.
struct GainVector {
  std::vector<std::uint8_t> gains;
  std::size_t relevant_total = 0;

  std::size_t size() const { return gains.size(); }
  bool operator==(const GainVector&) const = default;
};

enum class UnknownObjectPolicy { kWarn, kError };

Run ParseRun(std::string_view text, const std::string& source_name,
             Diagnostics* warnings = nullptr);
Run LoadRun(const std::string& path, Diagnostics* warnings = nullptr);

DissimilarityMatrix ParseMatrix(std::string_view text,
                                const std::string& source_name);
DissimilarityMatrix LoadMatrix(const std::string& path);

// Rows sorted ascending by dissimilarity, ties by id; the diagonal is skipped.
Run RankedListsFromMatrix(const DissimilarityMatrix& m,
                          std::string name = "matrix");

// Requires every off-diagonal pair to carry a score.
DissimilarityMatrix MatrixFromRun(const Run& run);

// Run file text. Lists without scores are written with their rank as score.
std::string SerializeRun(const Run& run);
std::string SerializeMatrix(const DissimilarityMatrix& m);

// Relevance of each ranked object w.r.t. the query's class. R is the class
// size minus one (the query never retrieves itself).
GainVector MakeGainVector(const RankedList& list, const Classification& c,
                          UnknownObjectPolicy policy = UnknownObjectPolicy::kWarn,
                          Diagnostics* warnings = nullptr);

// Perfect ranking: R ones followed by `length - R` zeros.
GainVector IdealGainVector(std::size_t relevant_total, std::size_t length);

}  // namespace shapeeval

#endif  // SHAPEEVAL_RUNS_HPP_
