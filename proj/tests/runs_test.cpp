#include "shapeeval/runs.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "test_util.hpp"

namespace shapeeval {
namespace {

using Ids = std::vector<ObjectId>;

TEST(LoadRun, OrdersByScore) {
  const shapeeval::Run run = ParseRun("q1 b 0.3\nq1 a 0.1\n", "r.txt");
  ASSERT_EQ(run.lists.size(), 1u);
  EXPECT_EQ(run.lists.at("q1").ranking, (Ids{"a", "b"}));
  EXPECT_EQ(run.lists.at("q1").scores, (std::vector<double>{0.1, 0.3}));
}

TEST(LoadRun, TieBrokenById) {
  const shapeeval::Run run = ParseRun("q1 b 0.5\nq1 a 0.5\n", "r.txt");
  EXPECT_EQ(run.lists.at("q1").ranking, (Ids{"a", "b"}));
}

TEST(LoadRun, SelfMatchDroppedWithWarning) {
  Diagnostics warnings;
  const shapeeval::Run run = ParseRun("q1 q1 0.0\nq1 x 0.2\nq1 y 0.1\n", "r.txt", &warnings);
  EXPECT_EQ(run.lists.at("q1").ranking, (Ids{"y", "x"}));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].message.find("r.txt:1"), std::string::npos);
}

TEST(LoadRun, DuplicatePairIsError) {
  try {
    ParseRun("q1 a 0.1\nq1 b 0.2\nq1 a 0.3\n", "r.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadRun, NonNumericScore) {
  try {
    ParseRun("q1 a 0.1\nq1 b zero\n", "r.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("zero"), std::string::npos);
  }
  EXPECT_THROW(ParseRun("q1 a nan\n", "r.txt"), ParseError);
  EXPECT_THROW(ParseRun("q1 a 1.0 extra\n", "r.txt"), ParseError);
  EXPECT_THROW(ParseRun("# only comments\n", "r.txt"), ParseError);
}

TEST(LoadRun, MetadataDirectives) {
  const shapeeval::Run run = ParseRun(
      "# name: LFD\n# method: light field\n# query_time_ms: 12.5\n"
      "# descriptor_bytes: 4700\n# free comment\nq a 1\n",
      "r.txt");
  EXPECT_EQ(run.name, "LFD");
  EXPECT_EQ(run.method_label, "light field");
  EXPECT_EQ(run.meta.reported_query_time_ms, 12.5);
  EXPECT_EQ(run.meta.descriptor_bytes, 4700);
  EXPECT_THROW(ParseRun("# descriptor_bytes: lots\nq a 1\n", "r.txt"), ParseError);
}

TEST(LoadRun, NameDefaultsToFileStem) {
  shapeeval::testing::TempDir dir;
  const std::string path = dir.Write("my_run.txt", "q a 1\n");
  EXPECT_EQ(LoadRun(path).name, "my_run");
}

TEST(RankedListsFromMatrix, SortsRowAndSkipsDiagonal) {
  const DissimilarityMatrix m({"a", "b", "c"},
                              {0, 0.2, 0.1,  //
                               0.2, 0, 0.3,  //
                               0.1, 0.3, 0});
  const shapeeval::Run run = RankedListsFromMatrix(m);
  EXPECT_EQ(run.lists.at("a").ranking, (Ids{"c", "b"}));
  EXPECT_EQ(run.lists.at("b").ranking, (Ids{"a", "c"}));
}

TEST(RankedListsFromMatrix, EqualValuesInIdOrder) {
  const DissimilarityMatrix m({"d", "b", "c", "a"}, std::vector<double>(16, 1.0));
  const shapeeval::Run run = RankedListsFromMatrix(m);
  EXPECT_EQ(run.lists.at("d").ranking, (Ids{"a", "b", "c"}));
  EXPECT_EQ(run.lists.at("a").ranking, (Ids{"b", "c", "d"}));
}

TEST(RankedListsFromMatrix, NegativeEntryReportsCoordinates) {
  const DissimilarityMatrix m({"a", "b", "c"}, {0, 1, 1, 1, 0, -0.5, 1, 1, 0});
  try {
    RankedListsFromMatrix(m);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2 column 3"), std::string::npos)
        << e.what();
  }
}

TEST(RankedListsFromMatrix, NonFiniteEntry) {
  const double inf = std::numeric_limits<double>::infinity();
  const DissimilarityMatrix m({"a", "b"}, {0, inf, 1, 0});
  try {
    RankedListsFromMatrix(m);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1 column 2"), std::string::npos);
  }
}

TEST(DissimilarityMatrix, ShapeAndIds) {
  EXPECT_THROW(DissimilarityMatrix({"a", "b"}, {0, 1, 1}), InputError);
  EXPECT_THROW(DissimilarityMatrix({"a", "a"}, {0, 1, 1, 0}), InputError);
}

TEST(ParseMatrix, TextAndCsvAgree) {
  const auto text = ParseMatrix("3\na b c\n0 1 2\n1 0 3\n2 3 0\n", "m.txt");
  const auto csv = ParseMatrix(",a,b,c\na,0,1,2\nb,1,0,3\nc,2,3,0\n", "m.csv");
  EXPECT_EQ(text.ids(), csv.ids());
  EXPECT_EQ(text.values(), csv.values());
}

TEST(ParseMatrix, Errors) {
  try {
    ParseMatrix("2\na b\n0 1\n1 x\n", "m.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(ParseMatrix("2\na b\n0 1\n1\n", "m.txt"), ParseError);
  EXPECT_THROW(ParseMatrix("2\na b\n0 1\n1 0 7\n", "m.txt"), ParseError);
  EXPECT_THROW(ParseMatrix("", "m.txt"), ParseError);
  try {
    ParseMatrix(",a,b\na,0,1\nc,1,0\n", "m.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MatrixRunConversion, MatrixToRunFileToListsIsLossless) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    Ids ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("o" + std::to_string(i));
    std::vector<double> values(n * n);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (auto& v : values) v = (rng() % 4 == 0) ? 0.5 : dist(rng);
    const DissimilarityMatrix m(ids, values);
    const shapeeval::Run direct = RankedListsFromMatrix(m, "m");
    const shapeeval::Run via_file = ParseRun(SerializeRun(direct), "m");
    EXPECT_EQ(via_file.lists, direct.lists);
    // And back to a matrix (diagonal becomes 0).
    const DissimilarityMatrix back = MatrixFromRun(via_file);
    EXPECT_EQ(RankedListsFromMatrix(back, "m").lists, direct.lists);
  }
}

TEST(MatrixRunConversion, IncompleteRunCannotBecomeMatrix) {
  const shapeeval::Run run = ParseRun("a b 1\nb a 1\nb c 2\n", "r");
  EXPECT_THROW(MatrixFromRun(run), InputError);
}

// Integer-valued entries keep + and x by exact constants exact in binary.
TEST(RankedListsFromMatrixProperty, AffineInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 15;
    Ids ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(n - i));
    std::vector<double> values(n * n);
    for (auto& v : values) v = static_cast<double>(rng() % 20);
    const shapeeval::Run base = RankedListsFromMatrix(DissimilarityMatrix(ids, values));
    for (double scale : {0.5, 3.0, 1024.0}) {
      std::vector<double> scaled = values;
      for (auto& v : scaled) v *= scale;
      const shapeeval::Run r = RankedListsFromMatrix(DissimilarityMatrix(ids, scaled));
      for (const auto& [q, list] : base.lists) {
        EXPECT_EQ(r.lists.at(q).ranking, list.ranking);
      }
    }
    for (double shift : {1.0, 17.0, 4096.0}) {
      std::vector<double> shifted = values;
      for (auto& v : shifted) v += shift;
      const shapeeval::Run r = RankedListsFromMatrix(DissimilarityMatrix(ids, shifted));
      for (const auto& [q, list] : base.lists) {
        EXPECT_EQ(r.lists.at(q).ranking, list.ranking);
      }
    }
  }
}

Classification ThreeClassToy() {
  Classification c;
  for (const char* id : {"q", "x", "y"}) c.Add(id, "A");
  for (const char* id : {"z", "w"}) c.Add(id, "B");
  c.Add("s", "S");
  return c;
}

TEST(MakeGainVector, DirectMembership) {
  const GainVector g = MakeGainVector({"q", {"x", "z", "y"}, {}}, ThreeClassToy());
  EXPECT_EQ(g.gains, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(g.relevant_total, 2u);
}

TEST(MakeGainVector, SingletonQuery) {
  const GainVector g = MakeGainVector({"s", {"x", "z", "y", "q"}, {}}, ThreeClassToy());
  EXPECT_EQ(g.gains, (std::vector<std::uint8_t>{0, 0, 0, 0}));
  EXPECT_EQ(g.relevant_total, 0u);
}

TEST(MakeGainVector, WorkedSequence) {
  // Relevant objects r*, irrelevant n*, arranged to reproduce
  // <1,1,1,0,0,1,1,0,1,0>.
  Classification c;
  c.Add("query", "rel");
  for (int k = 1; k <= 6; ++k) c.Add("r" + std::to_string(k), "rel");
  for (int k = 1; k <= 4; ++k) c.Add("n" + std::to_string(k), "other");
  const RankedList list{"query",
                        {"r1", "r2", "r3", "n1", "n2", "r4", "r5", "n3", "r6", "n4"},
                        {}};
  const GainVector g = MakeGainVector(list, c);
  EXPECT_EQ(g.gains, (std::vector<std::uint8_t>{1, 1, 1, 0, 0, 1, 1, 0, 1, 0}));
  EXPECT_EQ(g.relevant_total, 6u);
}

TEST(MakeGainVector, UnknownObjects) {
  Diagnostics warnings;
  const GainVector g = MakeGainVector({"q", {"ghost", "x"}, {}}, ThreeClassToy(),
                                      UnknownObjectPolicy::kWarn, &warnings);
  EXPECT_EQ(g.gains, (std::vector<std::uint8_t>{0, 1}));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].message.find("ghost"), std::string::npos);
  try {
    MakeGainVector({"q", {"ghost"}, {}}, ThreeClassToy(), UnknownObjectPolicy::kError);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
}

TEST(MakeGainVector, InvalidLists) {
  EXPECT_THROW(MakeGainVector({"nobody", {"x"}, {}}, ThreeClassToy()), InputError);
  EXPECT_THROW(MakeGainVector({"q", {"q"}, {}}, ThreeClassToy()), InputError);
  EXPECT_THROW(MakeGainVector({"q", {"x", "x", "y"}, {}}, ThreeClassToy()),
               InputError);
}

TEST(MakeGainVectorProperty, PerfectRankingIsIdeal) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Classification c;
    const int rel = 1 + static_cast<int>(rng() % 10);
    const int irr = static_cast<int>(rng() % 10);
    c.Add("q", "A");
    Ids relevant, irrelevant;
    for (int k = 0; k < rel; ++k) {
      relevant.push_back("a" + std::to_string(k));
      c.Add(relevant.back(), "A");
    }
    for (int k = 0; k < irr; ++k) {
      irrelevant.push_back("b" + std::to_string(k));
      c.Add(irrelevant.back(), "B");
    }
    std::shuffle(relevant.begin(), relevant.end(), rng);
    std::shuffle(irrelevant.begin(), irrelevant.end(), rng);
    RankedList list{"q", relevant, {}};
    list.ranking.insert(list.ranking.end(), irrelevant.begin(), irrelevant.end());
    EXPECT_EQ(MakeGainVector(list, c), IdealGainVector(rel, rel + irr));
  }
}

TEST(MakeGainVectorProperty, PermutingIrrelevantKeepsPrefixSums) {
  std::mt19937_64 rng(8);
  const Classification c = [] {
    Classification out;
    out.Add("q", "A");
    for (int k = 0; k < 8; ++k) out.Add("a" + std::to_string(k), "A");
    for (int k = 0; k < 12; ++k) out.Add("b" + std::to_string(k), "B");
    return out;
  }();
  for (int trial = 0; trial < 100; ++trial) {
    Ids ranking;
    for (int k = 0; k < 8; ++k) ranking.push_back("a" + std::to_string(k));
    for (int k = 0; k < 12; ++k) ranking.push_back("b" + std::to_string(k));
    std::shuffle(ranking.begin(), ranking.end(), rng);
    const GainVector before = MakeGainVector({"q", ranking, {}}, c);
    // Permute the irrelevant objects among their own positions.
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      if (ranking[i][0] == 'b') slots.push_back(i);
    }
    Ids shuffled_irr;
    for (auto i : slots) shuffled_irr.push_back(ranking[i]);
    std::shuffle(shuffled_irr.begin(), shuffled_irr.end(), rng);
    for (std::size_t k = 0; k < slots.size(); ++k) ranking[slots[k]] = shuffled_irr[k];
    const GainVector after = MakeGainVector({"q", ranking, {}}, c);
    std::size_t sb = 0, sa = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      sb += before.gains[i];
      sa += after.gains[i];
      EXPECT_EQ(sa, sb);
    }
  }
}

}  // namespace
}  // namespace shapeeval
