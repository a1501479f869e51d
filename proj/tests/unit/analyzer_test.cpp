#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "verifact/analyzer.hpp"
#include "verifact/errors.hpp"

using namespace verifact;

TEST(Kendall, PerfectAndReversed) {
  std::vector<double> x{1, 2, 3, 4}, y{10, 20, 30, 40}, r{4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(kendall_tau(x, y), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, r), -1.0);
}

TEST(Kendall, TiesUseTauB) {
  // C=4, D=0, n0=6, n1=1, n2=1 -> 4/5
  std::vector<double> x{1, 1, 2, 3}, y{1, 2, 2, 3};
  EXPECT_NEAR(kendall_tau(x, y), 4.0 / 5.0, 1e-12);
  const auto c = kendall_counts(x, y);
  EXPECT_EQ(c.pairs, 6);
  EXPECT_EQ(c.ties_x, 1);
  EXPECT_EQ(c.ties_y, 1);
}

TEST(Kendall, ConstantIsNaNAndBadInput) {
  std::vector<double> x{1, 2, 3}, c{5, 5, 5}, shortv{1};
  EXPECT_TRUE(std::isnan(kendall_tau(x, c)));
  EXPECT_THROW(kendall_tau(x, shortv), std::invalid_argument);
  EXPECT_THROW(kendall_tau(shortv, shortv), std::invalid_argument);
}

TEST(Kendall, AgreesWithPairLoop) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 40)(rng);
    std::uniform_int_distribution<int> v(0, 6);
    std::vector<double> x, y;
    for (int i = 0; i < n; ++i) {
      x.push_back(v(rng));
      y.push_back(v(rng));
    }
    const auto fast = kendall_counts(x, y);
    const auto slow = vt::tally_pairs(x, y);
    ASSERT_EQ(fast.concordant, slow.concordant);
    ASSERT_EQ(fast.discordant, slow.discordant);
    ASSERT_EQ(fast.ties_xy, slow.tied_both);
    ASSERT_EQ(fast.ties_x, slow.tied_x_only + slow.tied_both);
    ASSERT_EQ(fast.ties_y, slow.tied_y_only + slow.tied_both);
    const double a = kendall_tau(x, y), b = vt::tau_b_brute(x, y);
    if (std::isnan(b)) {
      ASSERT_TRUE(std::isnan(a));
    } else {
      ASSERT_NEAR(a, b, 1e-12);
    }
  }
}

namespace {
ModelDomainMatrix sample() {
  return ModelDomainMatrix::from_scores({"m1", "m2", "m3"}, {"a", "b"},
                                        {{0.5, 0.7}, {0.6, 0.9}, {0.2, 0.1}});
}
}  // namespace

TEST(Matrix, AveragesAndShape) {
  const auto m = sample();
  EXPECT_NEAR(m.averages[1], 0.75, 1e-12);
  EXPECT_THROW(ModelDomainMatrix::from_scores({"m"}, {"a", "b"}, {{0.1}}), FormatError);
}

TEST(Correlation, SymmetricUnitDiagonal) {
  const auto c = correlation_matrix(sample());
  ASSERT_EQ(c.labels, (std::vector<std::string>{"a", "b", "Avg."}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(c.tau[i][i], 1.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(c.tau[i][j], c.tau[j][i]);
  }
  EXPECT_DOUBLE_EQ(c.tau[0][1], 1.0);
  const auto one = ModelDomainMatrix::from_scores({"m"}, {"a"}, {{0.1}});
  EXPECT_THROW(correlation_matrix(one), std::invalid_argument);
}

TEST(Leaderboard, SortedWithTieBreak) {
  const auto m = ModelDomainMatrix::from_scores({"zeta", "alpha", "mid"}, {"a"},
                                                {{0.5}, {0.5}, {0.9}});
  const auto lb = render_leaderboard(m);
  ASSERT_EQ(lb.rows.size(), 3u);
  EXPECT_EQ(lb.rows[0].model, "mid");
  EXPECT_EQ(lb.rows[1].model, "alpha");
  EXPECT_EQ(lb.rows[2].model, "zeta");
  EXPECT_NE(lb.csv.find("90.0"), std::string::npos);
  EXPECT_NE(lb.text.find("Avg."), std::string::npos);
}

TEST(Leaderboard, CorrelationCsvHasHeader) {
  const auto csv = correlation_csv(correlation_matrix(sample()));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), ",a,b,Avg.");
}
