#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pvalprior/error.hpp"
#include "pvalprior/expression.hpp"
#include "test_data.hpp"

namespace pvalprior {
namespace {

using testing::consecutive_design;
using testing::make_matrix;

ExpressionMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return load_matrix(in);
}

std::string render(const ExpressionMatrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  return out.str();
}

TEST(LoadMatrix, MinimalInput) {
  const auto m = parse("gene_id,s1,s2\ng1,0.5,1.5\n");
  ASSERT_EQ(m.genes(), 1u);
  ASSERT_EQ(m.samples(), 2u);
  EXPECT_EQ(m(0, 0), 0.5);
  EXPECT_EQ(m(0, 1), 1.5);
  EXPECT_EQ(m.gene_ids().front(), "g1");
  EXPECT_EQ(m.sample_ids()[1], "s2");
}

TEST(LoadMatrix, RaggedRowNamesRow) {
  try {
    parse("gene_id,s1,s2\ng1,1,2,3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(LoadMatrix, AcceptsCrlfAndMissingFinalNewline) {
  const auto a = parse("gene_id,s1\r\ng1,1\r\ng2,2\r\n");
  const auto b = parse("gene_id,s1\ng1,1\ng2,2");
  EXPECT_EQ(a, b);
}

TEST(LoadMatrix, KeepsRowOrder) {
  const auto m = parse("gene_id,s1\nzeta,1\nalpha,2\nmid,3\n");
  EXPECT_EQ(m.gene_ids(), (std::vector<std::string>{"zeta", "alpha", "mid"}));
}

TEST(LoadMatrix, RejectsBadCells) {
  const auto column_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.row(), e.column());
    }
    return std::make_pair(std::size_t{0}, std::size_t{0});
  };
  EXPECT_EQ(column_of("gene_id,s1,s2\ng1,1,abc\n"), std::make_pair(std::size_t{2}, std::size_t{3}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,nan\n"), std::make_pair(std::size_t{2}, std::size_t{2}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,inf\n"), std::make_pair(std::size_t{2}, std::size_t{2}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,1e999\n"), std::make_pair(std::size_t{2}, std::size_t{2}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,1,5\n"), std::make_pair(std::size_t{2}, std::size_t{0}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,1\ng1,2\n"), std::make_pair(std::size_t{3}, std::size_t{1}));
  EXPECT_EQ(column_of("gene_id,s1,s1\ng1,1,2\n"), std::make_pair(std::size_t{1}, std::size_t{3}));
  EXPECT_EQ(column_of("probe,s1\ng1,1\n"), std::make_pair(std::size_t{1}, std::size_t{1}));
  EXPECT_EQ(column_of("gene_id,s1\ng1,1 \n"), std::make_pair(std::size_t{2}, std::size_t{2}));
  EXPECT_EQ(column_of("gene_id,s1\n\ng1,1\n"), std::make_pair(std::size_t{2}, std::size_t{0}));
}

TEST(LoadMatrix, ParsingIgnoresGlobalLocale) {
  std::locale::global(std::locale("C"));
  const auto m = parse("gene_id,s1\ng1,1.25\n");
  EXPECT_EQ(m(0, 0), 1.25);
}

TEST(WriteMatrix, DegenerateMatrix) {
  EXPECT_EQ(render(make_matrix({{0.0}})), "gene_id,s1\ng1,0\n");
}

TEST(WriteMatrix, ShortestRendering) {
  EXPECT_EQ(render(make_matrix({{0.1, -2.5e-7, 1e22}})), "gene_id,s1,s2,s3\ng1,0.1,-2.5e-07,1e+22\n");
}

TEST(WriteMatrix, RoundTripsRandomMatrices) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 7);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = dim(rng);
    const int cols = dim(rng);
    std::vector<std::vector<double>> values(rows, std::vector<double>(cols));
    for (auto& row : values) {
      for (auto& v : row) {
        v = trial % 3 == 0 ? mantissa(rng) * std::pow(10.0, exponent(rng)) : mantissa(rng) * 10.0;
      }
    }
    const auto m = make_matrix(values);
    const auto text = render(m);
    const auto back = parse(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(render(back), text);
  }
}

TEST(ExpressionMatrix, RejectsInvalidConstruction) {
  EXPECT_THROW(ExpressionMatrix({}, {"s1"}, {}), Error);
  EXPECT_THROW(ExpressionMatrix({"g1"}, {"s1"}, {1.0, 2.0}), Error);
  EXPECT_THROW(ExpressionMatrix({"g1"}, {"s1"}, {NAN}), Error);
  EXPECT_THROW(ExpressionMatrix({"g1", "g1"}, {"s1"}, {1.0, 2.0}), Error);
  EXPECT_THROW(ExpressionMatrix({"g,1"}, {"s1"}, {1.0}), Error);
}

TEST(GroupDesign, Validation) {
  EXPECT_THROW(GroupDesign({}, 4), Error);
  EXPECT_THROW(GroupDesign({{"A", {0}}}, 4), Error);
  EXPECT_THROW(GroupDesign({{"A", {0, 4}}}, 4), Error);
  EXPECT_THROW(GroupDesign({{"A", {0, 1}}, {"B", {1, 2}}}, 4), Error);
  EXPECT_THROW(GroupDesign({{"A", {0, 1}}, {"A", {2, 3}}}, 4), Error);
  const GroupDesign ok({{"A", {0, 1}}, {"B", {2, 3}}}, 5);
  EXPECT_EQ(ok.group("B").columns, (std::vector<std::size_t>{2, 3}));
  EXPECT_THROW((void)ok.group("C"), Error);
}

TEST(GroupDesign, CsvRoundTrip) {
  const auto m = make_matrix({{1, 2, 3, 4, 5}});
  const GroupDesign design({{"ctrl", {4, 0}}, {"trt", {1, 3}}}, 5);
  std::ostringstream out;
  write_design(out, m, design);
  EXPECT_EQ(out.str(), "sample_id,group\ns5,ctrl\ns1,ctrl\ns2,trt\ns4,trt\n");
  std::istringstream in(out.str());
  EXPECT_EQ(load_design(in, m), design);
}

TEST(GroupDesign, UnknownSampleInDesignFile) {
  const auto m = make_matrix({{1, 2}});
  std::istringstream in("sample_id,group\ns1,A\nsX,A\n");
  EXPECT_THROW(load_design(in, m), ParseError);
}

TEST(DeltaZ, ConstantGroups) {
  const auto m = make_matrix({{1, 1, 1, 2, 2, 2}});
  const auto dz = delta_z(m, consecutive_design(2, 3), "A", "B");
  EXPECT_EQ(dz.delta.front(), 1.0);
}

TEST(DeltaZ, IdenticalGroupsGiveZero) {
  const auto m = make_matrix({{0.1, 0.7, -3, 0.1, 0.7, -3}, {5, 6, 7, 7, 6, 5}});
  const auto dz = delta_z(m, consecutive_design(2, 3), "A", "B");
  EXPECT_EQ(dz.delta, (std::vector<double>{0.0, 0.0}));
}

TEST(DeltaZ, HandArithmetic) {
  const auto m = make_matrix({{0.0, 0.3, 0.6, 1.0, 1.1, 1.2}});
  const auto dz = delta_z(m, consecutive_design(2, 3), "A", "B");
  EXPECT_NEAR(dz.delta.front(), 0.8, 1e-15);
}

TEST(DeltaZ, UnknownGroup) {
  const auto m = make_matrix({{1, 2, 3, 4}});
  EXPECT_THROW(delta_z(m, consecutive_design(2, 2), "A", "Z"), Error);
}

TEST(DeltaZ, AntisymmetricAndPermutationInvariant) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> rows(20, std::vector<double>(8));
    for (auto& r : rows) {
      for (auto& v : r) v = normal(rng) * 3.7;
    }
    const auto m = make_matrix(rows);
    const auto design = consecutive_design(2, 4);
    const auto ab = delta_z(m, design, "A", "B");
    const auto ba = delta_z(m, design, "B", "A");
    for (std::size_t g = 0; g < ab.delta.size(); ++g) EXPECT_EQ(ab.delta[g], -ba.delta[g]);

    // Same data, columns shuffled within each group.
    std::vector<std::size_t> a{0, 1, 2, 3};
    std::vector<std::size_t> b{4, 5, 6, 7};
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    const GroupDesign shuffled({{"A", a}, {"B", b}}, 8);
    EXPECT_EQ(delta_z(m, shuffled, "A", "B").delta, ab.delta);
  }
}

TEST(DeltaZ, CsvRoundTrip) {
  const DeltaZVector dz{{"g1", "g2"}, {0.25, -1e-9}};
  std::ostringstream out;
  write_delta_z(out, dz);
  EXPECT_EQ(out.str(), "gene_id,delta\ng1,0.25\ng2,-1e-09\n");
  std::istringstream in(out.str());
  const auto back = load_delta_z(in);
  EXPECT_EQ(back.gene_ids, dz.gene_ids);
  EXPECT_EQ(back.delta, dz.delta);
}

TEST(SelectColumns, PicksInOrder) {
  const auto m = make_matrix({{1, 2, 3}, {4, 5, 6}});
  const std::vector<std::size_t> cols{2, 0};
  const auto s = select_columns(m, cols);
  EXPECT_EQ(s.sample_ids(), (std::vector<std::string>{"s3", "s1"}));
  EXPECT_EQ(s(1, 0), 6.0);
  EXPECT_EQ(s(1, 1), 4.0);
}

}  // namespace
}  // namespace pvalprior
