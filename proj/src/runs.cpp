#include "shapeeval/runs.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_set>

#include "text_util.hpp"

namespace shapeeval {

using internal::FormatShortest;
using internal::ParseDouble;
using internal::ParseInt;
using internal::SplitLines;
using internal::StripComment;
using internal::Tokenize;
using internal::Trim;

DissimilarityMatrix::DissimilarityMatrix(std::vector<ObjectId> ids,
                                         std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) {
    throw InputError(fmt::format("matrix has {} values, expected {}x{}",
                                 values_.size(), ids_.size(), ids_.size()));
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids_) {
    if (!IsValidIdentifier(id)) {
      throw InputError(fmt::format("invalid matrix id '{}'", id));
    }
    if (!seen.insert(id).second) {
      throw InputError(fmt::format("duplicate matrix id '{}'", id));
    }
  }
}

void DissimilarityMatrix::Validate() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v)) {
        throw InputError(fmt::format(
            "non-finite dissimilarity at row {} column {} ('{}' -> '{}')", i + 1,
            j + 1, ids_[i], ids_[j]));
      }
      if (v < 0) {
        throw InputError(fmt::format(
            "negative dissimilarity {} at row {} column {} ('{}' -> '{}')", v,
            i + 1, j + 1, ids_[i], ids_[j]));
      }
    }
  }
}

namespace {

struct Entry {
  double score;
  std::string object;
};

void SortEntries(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.score, a.object) < std::tie(b.score, b.object);
  });
}

RankedList ToRankedList(const ObjectId& query, std::vector<Entry> entries) {
  SortEntries(entries);
  RankedList list;
  list.query = query;
  list.ranking.reserve(entries.size());
  list.scores.reserve(entries.size());
  for (auto& e : entries) {
    list.ranking.push_back(std::move(e.object));
    list.scores.push_back(e.score);
  }
  return list;
}

// Handles `# key: value` metadata lines. Returns false for plain comments.
bool ApplyDirective(std::string_view line, Run& run, const std::string& source,
                    std::size_t line_no) {
  line = Trim(line);
  if (line.empty() || line.front() != '#') return false;
  line = Trim(line.substr(1));
  const std::size_t colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  const std::string_view key = Trim(line.substr(0, colon));
  const std::string_view value = Trim(line.substr(colon + 1));
  if (key == "name") {
    run.name = std::string(value);
  } else if (key == "method") {
    run.method_label = std::string(value);
  } else if (key == "query_time_ms") {
    auto v = ParseDouble(value);
    if (!v) throw ParseError(source, line_no, "query_time_ms is not a number");
    run.meta.reported_query_time_ms = *v;
  } else if (key == "descriptor_bytes") {
    auto v = ParseInt(value);
    if (!v) throw ParseError(source, line_no, "descriptor_bytes is not an integer");
    run.meta.descriptor_bytes = *v;
  } else {
    return false;
  }
  return true;
}

std::string StemOf(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  return stem.empty() ? path : stem;
}

}  // namespace

Run ParseRun(std::string_view text, const std::string& source_name,
             Diagnostics* warnings) {
  Run run;
  run.name = source_name;
  std::map<ObjectId, std::vector<Entry>> per_query;
  std::set<std::pair<std::string_view, std::string_view>> seen;

  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (ApplyDirective(lines[i], run, source_name, line_no)) continue;
    const std::string_view line = StripComment(lines[i]);
    if (line.empty()) continue;
    const auto tokens = Tokenize(line);
    if (tokens.size() != 3) {
      throw ParseError(source_name, line_no,
                       fmt::format("expected 'query_id object_id score', got {} "
                                   "field(s)",
                                   tokens.size()));
    }
    const auto score = ParseDouble(tokens[2]);
    if (!score || !std::isfinite(*score)) {
      throw ParseError(source_name, line_no,
                       fmt::format("score '{}' is not a finite number", tokens[2]));
    }
    if (!seen.emplace(tokens[0], tokens[1]).second) {
      throw ParseError(source_name, line_no,
                       fmt::format("duplicate result '{}' for query '{}'",
                                   tokens[1], tokens[0]));
    }
    auto& entries = per_query[std::string(tokens[0])];
    if (tokens[0] == tokens[1]) {
      Warn(warnings, fmt::format("{}:{}: query '{}' listed as its own result; "
                                 "dropped",
                                 source_name, line_no, tokens[0]));
      continue;
    }
    entries.push_back({*score, std::string(tokens[1])});
  }
  if (per_query.empty()) throw ParseError(source_name, 0, "run has no results");
  for (auto& [query, entries] : per_query) {
    run.lists.emplace(query, ToRankedList(query, std::move(entries)));
  }
  return run;
}

Run LoadRun(const std::string& path, Diagnostics* warnings) {
  Run run = ParseRun(internal::ReadFile(path), path, warnings);
  if (run.name == path) run.name = StemOf(path);
  return run;
}

namespace {

DissimilarityMatrix ParseCsvMatrix(const std::vector<std::string_view>& lines,
                                   const std::string& source) {
  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(Trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  std::vector<ObjectId> ids;
  std::vector<double> values;
  std::size_t row = 0;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (Trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i]);
    if (!have_header) {
      if (cells.size() < 2) throw ParseError(source, line_no, "CSV header has no ids");
      for (std::size_t k = 1; k < cells.size(); ++k) ids.emplace_back(cells[k]);
      values.reserve(ids.size() * ids.size());
      have_header = true;
      continue;
    }
    if (row >= ids.size()) throw ParseError(source, line_no, "more rows than ids");
    if (cells.size() != ids.size() + 1) {
      throw ParseError(source, line_no,
                       fmt::format("expected {} cells, got {}", ids.size() + 1,
                                   cells.size()));
    }
    if (cells[0] != ids[row]) {
      throw ParseError(source, line_no,
                       fmt::format("row id '{}' does not match column id '{}'",
                                   cells[0], ids[row]));
    }
    for (std::size_t k = 1; k < cells.size(); ++k) {
      auto v = ParseDouble(cells[k]);
      if (!v) {
        throw ParseError(source, line_no,
                         fmt::format("'{}' is not a number", cells[k]));
      }
      values.push_back(*v);
    }
    ++row;
  }
  if (!have_header) throw ParseError(source, 0, "empty matrix");
  if (row != ids.size()) {
    throw ParseError(source, 0,
                     fmt::format("expected {} rows, got {}", ids.size(), row));
  }
  try {
    return DissimilarityMatrix(std::move(ids), std::move(values));
  } catch (const InputError& e) {
    throw ParseError(source, 1, e.what());
  }
}

DissimilarityMatrix ParseTextMatrix(const std::vector<std::string_view>& lines,
                                    const std::string& source) {
  std::optional<std::size_t> n;
  std::vector<ObjectId> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    for (std::string_view token : Tokenize(StripComment(lines[i]))) {
      if (!n) {
        auto v = ParseInt(token);
        if (!v || *v < 1) {
          throw ParseError(source, line_no, "expected positive matrix size N");
        }
        n = static_cast<std::size_t>(*v);
        ids.reserve(*n);
        values.reserve(*n * *n);
      } else if (ids.size() < *n) {
        ids.emplace_back(token);
      } else if (values.size() < *n * *n) {
        auto v = ParseDouble(token);
        if (!v) {
          throw ParseError(source, line_no,
                           fmt::format("'{}' is not a number", token));
        }
        values.push_back(*v);
      } else {
        throw ParseError(source, line_no, "trailing data after matrix");
      }
    }
  }
  if (!n) throw ParseError(source, 0, "empty matrix");
  if (ids.size() < *n || values.size() < *n * *n) {
    throw ParseError(source, lines.size(),
                     fmt::format("matrix truncated: {} ids and {} values, "
                                 "expected {} and {}",
                                 ids.size(), values.size(), *n, *n * *n));
  }
  try {
    return DissimilarityMatrix(std::move(ids), std::move(values));
  } catch (const InputError& e) {
    throw ParseError(source, 0, e.what());
  }
}

}  // namespace

DissimilarityMatrix ParseMatrix(std::string_view text,
                                const std::string& source_name) {
  const auto lines = SplitLines(text);
  for (std::string_view line : lines) {
    if (Trim(line).empty()) continue;
    if (line.find(',') != std::string_view::npos) {
      return ParseCsvMatrix(lines, source_name);
    }
    break;
  }
  return ParseTextMatrix(lines, source_name);
}

DissimilarityMatrix LoadMatrix(const std::string& path) {
  return ParseMatrix(internal::ReadFile(path), path);
}

Run RankedListsFromMatrix(const DissimilarityMatrix& m, std::string name) {
  m.Validate();
  Run run;
  run.name = std::move(name);
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Entry> entries;
    entries.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) entries.push_back({m.at(i, j), m.ids()[j]});
    }
    run.lists.emplace(m.ids()[i], ToRankedList(m.ids()[i], std::move(entries)));
  }
  return run;
}

DissimilarityMatrix MatrixFromRun(const Run& run) {
  std::set<ObjectId> all;
  for (const auto& [query, list] : run.lists) {
    all.insert(query);
    all.insert(list.ranking.begin(), list.ranking.end());
  }
  std::vector<ObjectId> ids(all.begin(), all.end());
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  const std::size_t n = ids.size();
  std::vector<double> values(n * n, 0.0);
  std::vector<std::uint8_t> filled(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) filled[i * n + i] = 1;
  for (const auto& [query, list] : run.lists) {
    if (list.scores.size() != list.ranking.size()) {
      throw InputError(fmt::format("query '{}' has no scores; cannot build a "
                                   "matrix",
                                   query));
    }
    const std::size_t row = index.at(query);
    for (std::size_t k = 0; k < list.ranking.size(); ++k) {
      const std::size_t col = index.at(list.ranking[k]);
      values[row * n + col] = list.scores[k];
      filled[row * n + col] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!filled[i * n + j]) {
        throw InputError(fmt::format("run has no score for query '{}' and "
                                     "object '{}'; cannot build a full matrix",
                                     ids[i], ids[j]));
      }
    }
  }
  return DissimilarityMatrix(std::move(ids), std::move(values));
}

std::string SerializeRun(const Run& run) {
  std::string out;
  if (!run.name.empty()) out += fmt::format("# name: {}\n", run.name);
  if (!run.method_label.empty()) {
    out += fmt::format("# method: {}\n", run.method_label);
  }
  if (run.meta.reported_query_time_ms) {
    out += fmt::format("# query_time_ms: {}\n",
                       FormatShortest(*run.meta.reported_query_time_ms));
  }
  if (run.meta.descriptor_bytes) {
    out += fmt::format("# descriptor_bytes: {}\n", *run.meta.descriptor_bytes);
  }
  for (const auto& [query, list] : run.lists) {
    const bool has_scores = list.scores.size() == list.ranking.size();
    for (std::size_t k = 0; k < list.ranking.size(); ++k) {
      const double score = has_scores ? list.scores[k] : static_cast<double>(k + 1);
      out += fmt::format("{} {} {}\n", query, list.ranking[k], FormatShortest(score));
    }
  }
  return out;
}

std::string SerializeMatrix(const DissimilarityMatrix& m) {
  std::string out = fmt::format("{}\n", m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.ids()[i];
    out += i + 1 == m.size() ? '\n' : ' ';
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      out += FormatShortest(m.at(i, j));
      out += j + 1 == m.size() ? '\n' : ' ';
    }
  }
  return out;
}

GainVector MakeGainVector(const RankedList& list, const Classification& c,
                          UnknownObjectPolicy policy, Diagnostics* warnings) {
  const ObjectClass* query_class = c.ClassOf(list.query);
  if (query_class == nullptr) {
    throw InputError(fmt::format("query '{}' is not classified", list.query));
  }
  GainVector g;
  g.relevant_total = query_class->members.size() - 1;
  g.gains.reserve(list.ranking.size());
  std::size_t hits = 0;
  for (const auto& object : list.ranking) {
    if (object == list.query) {
      throw InputError(fmt::format("query '{}' appears in its own ranking",
                                   list.query));
    }
    const ObjectClass* cls = c.ClassOf(object);
    if (cls == nullptr) {
      if (policy == UnknownObjectPolicy::kError) {
        throw InputError(fmt::format("ranking for query '{}' contains unknown "
                                     "object '{}'",
                                     list.query, object));
      }
      Warn(warnings, fmt::format("ranking for query '{}' contains unknown object "
                                 "'{}'; treated as irrelevant",
                                 list.query, object));
    }
    const bool relevant = cls == query_class;
    hits += relevant;
    g.gains.push_back(relevant ? 1 : 0);
  }
  if (hits > g.relevant_total) {
    throw InputError(fmt::format("ranking for query '{}' repeats relevant "
                                 "objects",
                                 list.query));
  }
  return g;
}

GainVector IdealGainVector(std::size_t relevant_total, std::size_t length) {
  GainVector g;
  g.relevant_total = relevant_total;
  g.gains.assign(length, 0);
  std::fill_n(g.gains.begin(), std::min(relevant_total, length), 1);
  return g;
}

}  // namespace shapeeval
