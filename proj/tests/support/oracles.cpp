#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vt {

using verifact::AlgebraLabel;
using verifact::Judgment;

namespace {

bool any_of_part(const std::vector<Judgment>& row, Judgment j) {
  for (auto c : row) {
    if (c == j) return true;
  }
  return false;
}

}  // namespace

bool predicate_holds(AlgebraLabel label, const Grid& grid, std::size_t) {
  switch (label) {
    case AlgebraLabel::Supported:
      for (const auto& row : grid) {
        if (!any_of_part(row, Judgment::Supports) || any_of_part(row, Judgment::Contradicts)) {
          return false;
        }
      }
      return true;
    case AlgebraLabel::Contradicted:
      for (const auto& row : grid) {
        if (!any_of_part(row, Judgment::Supports) && any_of_part(row, Judgment::Contradicts)) {
          return true;
        }
      }
      return false;
    case AlgebraLabel::InconclusiveB:
      for (const auto& row : grid) {
        if (any_of_part(row, Judgment::Supports) && any_of_part(row, Judgment::Contradicts)) {
          return true;
        }
      }
      return false;
    case AlgebraLabel::InconclusiveA:
      for (const auto& row : grid) {
        if (!any_of_part(row, Judgment::Supports) && !any_of_part(row, Judgment::Contradicts)) {
          return true;
        }
      }
      return false;
  }
  return false;
}

AlgebraLabel oracle_label(const Grid& grid, std::size_t evidence) {
  for (auto l : {AlgebraLabel::Supported, AlgebraLabel::Contradicted, AlgebraLabel::InconclusiveB,
                 AlgebraLabel::InconclusiveA}) {
    if (predicate_holds(l, grid, evidence)) return l;
  }
  // Unreachable: every part falls in one of the four cases.
  return AlgebraLabel::InconclusiveA;
}

std::vector<Grid> all_grids(std::size_t parts, std::size_t evidence) {
  const std::size_t cells = parts * evidence;
  std::size_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= 3;
  std::vector<Grid> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    Grid g(parts, std::vector<Judgment>(evidence, Judgment::Neither));
    std::size_t c = code;
    for (std::size_t p = 0; p < parts; ++p) {
      for (std::size_t e = 0; e < evidence; ++e) {
        g[p][e] = static_cast<Judgment>(c % 3);
        c /= 3;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

PairTally tally_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  PairTally t;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) {
        ++t.tied_both;
      } else if (dx == 0) {
        ++t.tied_x_only;
      } else if (dy == 0) {
        ++t.tied_y_only;
      } else if ((dx > 0) == (dy > 0)) {
        ++t.concordant;
      } else {
        ++t.discordant;
      }
    }
  }
  return t;
}

double tau_b_brute(const std::vector<double>& x, const std::vector<double>& y) {
  const PairTally t = tally_pairs(x, y);
  // Pairs untied in x: concordant + discordant + tied in y only.
  const double untied_x = static_cast<double>(t.concordant + t.discordant + t.tied_y_only);
  const double untied_y = static_cast<double>(t.concordant + t.discordant + t.tied_x_only);
  if (untied_x == 0 || untied_y == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(t.concordant - t.discordant) / std::sqrt(untied_x * untied_y);
}

verifact::Rational median_by_sort(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return verifact::Rational(values[n / 2]);
  return verifact::Rational(values[n / 2 - 1] + values[n / 2]) / 2;
}

F1Parts f1_reference(std::int64_t claims, std::int64_t supported, const verifact::Rational& k) {
  F1Parts out;
  out.p = claims == 0 ? verifact::Rational(0) : verifact::Rational(supported) / claims;
  const verifact::Rational raw = verifact::Rational(supported) / k;
  out.r = raw > 1 ? verifact::Rational(1) : raw;
  out.f1 = supported == 0 ? verifact::Rational(0) : 2 * out.p * out.r / (out.p + out.r);
  return out;
}

}  // namespace vt
