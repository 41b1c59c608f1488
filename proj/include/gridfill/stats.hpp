#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridfill {

struct ShapiroWilk {
  double w = 0.0;
  double p_value = 0.0;
};

/// Shapiro-Wilk normality test with Royston's (1995) coefficient and p-value
/// approximations. Needs 3 <= n <= 5000 and a non-constant sample.
ShapiroWilk shapiro_wilk(std::span<const double> sample);

/// One-tailed paired t-test of H1: mean(a - b) < 0, i.e. a has lower error.
/// Throws InvalidArgument on unequal lengths, n < 2, or differences with
/// zero variance.
double paired_t_one_tailed(std::span<const double> a, std::span<const double> b);

/// One-tailed Wilcoxon signed-rank test of H1: a tends to be below b.
///
/// Zero differences are dropped and tied magnitudes get mid-ranks. Below 20
/// remaining pairs the p-value comes from the exact null distribution of W+;
/// otherwise from the normal approximation with tie and continuity
/// corrections. Throws InvalidArgument when every difference is zero.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Exact null distribution of the signed-rank statistic for the given
/// (possibly mid-)ranks. Entry s is P(2 * W+ == s).
std::vector<double> wilcoxon_exact_null(std::span<const double> ranks);

/// Mid-ranks (1-based) of the values.
std::vector<double> mid_ranks(std::span<const double> values);

/// Per-run errors of one method.
struct RunSample {
  std::string method;
  std::vector<double> values;
};

enum class TestKind { t, wilcoxon, none };

std::string_view to_string(TestKind kind);

struct RankEntry {
  std::string method;
  int wins = 0;
  double mean = 0.0;
  int rank = 0;  // 1-based
};

/// Pairwise significance and outperformance ranking.
///
/// Matrices are indexed [i][j] in input order: beats[i][j] means method i has
/// significantly lower error than j. Ranks are sorted by wins (descending),
/// then mean error (ascending), then name.
struct SignificanceReport {
  double alpha = 0.05;
  std::vector<std::string> methods;
  std::vector<std::vector<bool>> beats;
  std::vector<std::vector<TestKind>> test_used;
  std::vector<std::vector<double>> p_values;
  std::vector<bool> normal;  // Shapiro-Wilk p >= alpha
  std::vector<RankEntry> ranks;
};

/// For every ordered pair, a paired one-tailed t-test when both samples pass
/// the normality test, otherwise the Wilcoxon signed-rank test. A pair whose
/// differences are all zero gets p = 1 and test `none`; a t-test pair with
/// constant non-zero differences falls back to Wilcoxon.
SignificanceReport compare_and_rank(std::span<const RunSample> samples, double alpha = 0.05);

}  // namespace gridfill
