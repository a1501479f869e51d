#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace verifact {

/// VeriScore of each model (row) on each domain (column), as fractions in
/// [0, 1], plus the per-model mean over domains.
struct ModelDomainMatrix {
  std::vector<std::string> models;
  std::vector<std::string> domains;
  std::vector<std::vector<double>> scores;
  std::vector<double> averages;

  /// Validates the shape and fills `averages` with row means.
  static ModelDomainMatrix from_scores(std::vector<std::string> models,
                                       std::vector<std::string> domains,
                                       std::vector<std::vector<double>> scores);
};

/// Concordant/discordant pair tallies underlying tau-b.
struct KendallCounts {
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x = 0;   // n1: pairs tied in x (joint ties included)
  std::int64_t ties_y = 0;   // n2: pairs tied in y (joint ties included)
  std::int64_t ties_xy = 0;  // pairs tied in both
  std::int64_t pairs = 0;    // n(n-1)/2
};

/// Pair tallies in O(n log n) (sort by x, merge-count inversions in y).
KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b: (C - D) / sqrt((n0 - n1)(n0 - n2)). Counts are exact
/// integers; only the final ratio is floating point. Returns NaN when either
/// input is constant. Throws std::invalid_argument on length mismatch or
/// fewer than two observations.
double kendall_tau(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  /// Domain labels followed by "Avg.".
  std::vector<std::string> labels;
  std::vector<std::vector<double>> tau;
};

/// Tau between every pair of domain columns and between each domain and the
/// model averages. Symmetric with unit diagonal. Needs at least two models.
CorrelationMatrix correlation_matrix(const ModelDomainMatrix& matrix);

struct LeaderboardRow {
  std::string model;
  std::vector<double> scores;
  double average = 0.0;
};

struct Leaderboard {
  std::vector<LeaderboardRow> rows;  // sorted by average desc, then model id
  std::vector<std::string> columns;  // domains + "Avg."
  std::string text;                  // aligned plain-text table
  std::string csv;
};

/// Percentages with one decimal; ties in Avg. broken by model id.
Leaderboard render_leaderboard(const ModelDomainMatrix& matrix);

std::string correlation_csv(const CorrelationMatrix& matrix);

}  // namespace verifact
