#include "verifact/analyzer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "verifact/errors.hpp"

namespace verifact {

ModelDomainMatrix ModelDomainMatrix::from_scores(std::vector<std::string> models,
                                                 std::vector<std::string> domains,
                                                 std::vector<std::vector<double>> scores) {
  if (scores.size() != models.size()) {
    throw FormatError(fmt::format("{} models but {} score rows", models.size(), scores.size()));
  }
  ModelDomainMatrix m;
  m.averages.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].size() != domains.size()) {
      throw FormatError(fmt::format("model '{}' has {} scores for {} domains", models[i],
                                    scores[i].size(), domains.size()));
    }
    const double sum = std::accumulate(scores[i].begin(), scores[i].end(), 0.0);
    m.averages.push_back(domains.empty() ? 0.0 : sum / static_cast<double>(domains.size()));
  }
  m.models = std::move(models);
  m.domains = std::move(domains);
  m.scores = std::move(scores);
  return m;
}

namespace {

// Pairs among runs of equal values in an already sorted range.
template <class It, class Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run_end = std::next(first);
    while (run_end != last && eq(*first, *run_end)) ++run_end;
    const auto len = static_cast<std::int64_t>(std::distance(first, run_end));
    total += len * (len - 1) / 2;
    first = run_end;
  }
  return total;
}

// Merge sort on y counting strictly decreasing pairs (swaps).
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(
        fmt::format("kendall_tau: length mismatch ({} vs {})", x.size(), y.size()));
  }
  if (x.size() < 2) {
    throw std::invalid_argument("kendall_tau: need at least two observations");
  }
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> xy(n);
  for (std::size_t i = 0; i < n; ++i) xy[i] = {x[i], y[i]};
  std::sort(xy.begin(), xy.end());

  KendallCounts c;
  c.pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  c.ties_x = tied_pairs(xy.begin(), xy.end(),
                        [](const auto& a, const auto& b) { return a.first == b.first; });
  c.ties_xy = tied_pairs(xy.begin(), xy.end(), [](const auto& a, const auto& b) { return a == b; });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = xy[i].second;
  std::vector<double> buf(n);
  // Within x-ties y is sorted ascending, so those pairs never count as swaps.
  const std::int64_t swaps = count_inversions(ys, buf, 0, n);
  c.ties_y = tied_pairs(ys.begin(), ys.end(), std::equal_to<>{});

  c.discordant = swaps;
  c.concordant = c.pairs - c.ties_x - c.ties_y + c.ties_xy - swaps;
  return c;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const KendallCounts c = kendall_counts(x, y);
  const std::int64_t left = c.pairs - c.ties_x;
  const std::int64_t right = c.pairs - c.ties_y;
  if (left == 0 || right == 0) return std::numeric_limits<double>::quiet_NaN();
  const double denom = std::sqrt(static_cast<double>(left)) * std::sqrt(static_cast<double>(right));
  return static_cast<double>(c.concordant - c.discordant) / denom;
}

CorrelationMatrix correlation_matrix(const ModelDomainMatrix& matrix) {
  if (matrix.models.size() < 2) {
    throw std::invalid_argument("correlation_matrix: need at least two models");
  }
  std::vector<std::vector<double>> columns;
  CorrelationMatrix out;
  for (std::size_t d = 0; d < matrix.domains.size(); ++d) {
    std::vector<double> col;
    col.reserve(matrix.models.size());
    for (const auto& row : matrix.scores) col.push_back(row[d]);
    columns.push_back(std::move(col));
    out.labels.push_back(matrix.domains[d]);
  }
  columns.push_back(matrix.averages);
  out.labels.emplace_back("Avg.");

  const std::size_t k = columns.size();
  out.tau.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double t = kendall_tau(columns[i], columns[j]);
      out.tau[i][j] = t;
      out.tau[j][i] = t;
    }
  }
  return out;
}

namespace {

std::string percent(double v) { return fmt::format("{:.1f}", v * 100.0); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Leaderboard render_leaderboard(const ModelDomainMatrix& matrix) {
  Leaderboard lb;
  lb.columns = matrix.domains;
  lb.columns.emplace_back("Avg.");
  for (std::size_t i = 0; i < matrix.models.size(); ++i) {
    lb.rows.push_back({matrix.models[i], matrix.scores[i], matrix.averages[i]});
  }
  std::stable_sort(lb.rows.begin(), lb.rows.end(), [](const auto& a, const auto& b) {
    if (a.average != b.average) return a.average > b.average;
    return a.model < b.model;
  });

  std::size_t model_width = 5;
  for (const auto& r : lb.rows) model_width = std::max(model_width, r.model.size());
  std::vector<std::size_t> widths;
  for (const auto& c : lb.columns) widths.push_back(std::max<std::size_t>(c.size(), 5));

  lb.text = fmt::format("{:<{}}", "Model", model_width);
  lb.csv = "model";
  for (std::size_t c = 0; c < lb.columns.size(); ++c) {
    lb.text += fmt::format("  {:>{}}", lb.columns[c], widths[c]);
    lb.csv += "," + csv_field(lb.columns[c]);
  }
  lb.text += '\n';
  lb.csv += '\n';
  for (const auto& r : lb.rows) {
    lb.text += fmt::format("{:<{}}", r.model, model_width);
    lb.csv += csv_field(r.model);
    for (std::size_t c = 0; c < r.scores.size(); ++c) {
      lb.text += fmt::format("  {:>{}}", percent(r.scores[c]), widths[c]);
      lb.csv += "," + percent(r.scores[c]);
    }
    lb.text += fmt::format("  {:>{}}\n", percent(r.average), widths.back());
    lb.csv += "," + percent(r.average) + "\n";
  }
  return lb;
}

std::string correlation_csv(const CorrelationMatrix& matrix) {
  std::string out = "";
  for (const auto& l : matrix.labels) out += "," + csv_field(l);
  out += '\n';
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    out += csv_field(matrix.labels[i]);
    for (double t : matrix.tau[i]) out += fmt::format(",{:.4f}", t);
    out += '\n';
  }
  return out;
}

}  // namespace verifact
