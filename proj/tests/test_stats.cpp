#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gridfill/error.hpp"
#include "gridfill/stats.hpp"

using namespace gridfill;

namespace {
#include "oracle/stats_reference.inc"

// P(W+ <= observed) by listing every sign assignment of the ranks.
double enumerate_lower_tail(const std::vector<double>& ranks, double observed) {
  const std::size_t n = ranks.size();
  std::size_t hits = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) w += ranks[i];
    }
    if (w <= observed + 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::size_t{1} << n);
}

std::vector<RunSample> separated(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, 0.05);
  std::vector<RunSample> s{{"low", {}}, {"mid", {}}, {"high", {}}};
  for (int r = 0; r < 30; ++r) {
    s[0].values.push_back(1.0 + z(gen));
    s[1].values.push_back(2.0 + z(gen));
    s[2].values.push_back(3.0 + z(gen));
  }
  return s;
}

}  // namespace

TEST(ShapiroWilk, MatchesReference) {
  for (const auto& c : kShapiroCases) {
    const ShapiroWilk r = shapiro_wilk(c.x);
    EXPECT_NEAR(r.w, c.w, 1e-4) << c.name;
    EXPECT_NEAR(r.p_value, c.p, 1e-3) << c.name;
  }
}

TEST(ShapiroWilk, SizeAndPower) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> z(0.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  constexpr int kTrials = 2000;
  int normal_rejects = 0, exp_rejects = 0;
  std::vector<double> x(30);
  for (int t = 0; t < kTrials; ++t) {
    for (double& v : x) v = z(gen);
    normal_rejects += shapiro_wilk(x).p_value < 0.05;
    for (double& v : x) v = e(gen);
    exp_rejects += shapiro_wilk(x).p_value < 0.05;
  }
  // Size 0.05 has binomial sd ~0.005 here.
  EXPECT_NEAR(normal_rejects / double(kTrials), 0.05, 0.02);
  EXPECT_GT(exp_rejects / double(kTrials), 0.8);
}

TEST(ShapiroWilk, Preconditions) {
  EXPECT_THROW(shapiro_wilk(std::vector<double>(10, 2.0)), InvalidArgument);
  EXPECT_THROW(shapiro_wilk(std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST(PairedT, MatchesReference) {
  for (const auto& c : kTTestCases) EXPECT_NEAR(paired_t_one_tailed(c.a, c.b), c.p, 1e-6) << c.name;
}

TEST(PairedT, DirectionAndPreconditions) {
  std::vector<double> b(30), worse(30), better(30);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> z(0.0, 1e-3);
  for (std::size_t i = 0; i < 30; ++i) {
    b[i] = static_cast<double>(i % 7);
    worse[i] = b[i] + 1.0 + z(gen);
    better[i] = b[i] - 1.0 + z(gen);
  }
  EXPECT_GT(paired_t_one_tailed(worse, b), 1.0 - 1e-9);
  EXPECT_LT(paired_t_one_tailed(better, b), 1e-6);
  EXPECT_THROW(paired_t_one_tailed(b, b), InvalidArgument);
  EXPECT_THROW(paired_t_one_tailed(b, std::vector<double>(29, 0.0)), InvalidArgument);
}

TEST(Wilcoxon, MatchesReferenceApproximation) {
  for (const auto& c : kWilcoxonApproxCases) EXPECT_NEAR(wilcoxon_signed_rank(c.a, c.b), c.p, 1e-3) << c.name;
}

TEST(Wilcoxon, MatchesReferenceExact) {
  for (const auto& c : kWilcoxonExactCases) EXPECT_NEAR(wilcoxon_signed_rank(c.a, c.b), c.p, 1e-12) << c.name;
}

TEST(Wilcoxon, AllNegativeTenPairs) {
  std::vector<double> b(10), a(10);
  for (int i = 0; i < 10; ++i) {
    b[static_cast<std::size_t>(i)] = 0.3 * i * i;
    a[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - 0.75;
  }
  EXPECT_NEAR(wilcoxon_signed_rank(a, b), 1.0 / 1024.0, 1e-15);
  const auto ranks = mid_ranks(std::vector<double>(10, 0.75));
  EXPECT_NEAR(enumerate_lower_tail(ranks, 0.0), 1.0 / 1024.0, 1e-15);
}

TEST(Wilcoxon, ExactNullMatchesEnumeration) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> tie(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 12);
    std::vector<double> mags(n);
    for (double& m : mags) m = tie(gen);  // plenty of ties
    const auto ranks = mid_ranks(mags);
    const auto dist = wilcoxon_exact_null(ranks);
    double total = 0.0;
    for (double p : dist) total += p;
    ASSERT_NEAR(total, 1.0, 1e-12);
    double cum = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      cum += dist[s];
      if (dist[s] == 0.0) continue;
      ASSERT_NEAR(cum, enumerate_lower_tail(ranks, static_cast<double>(s) / 2.0), 1e-12);
    }
  }
}

TEST(Wilcoxon, Preconditions) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_THROW(wilcoxon_signed_rank(a, a), InvalidArgument);
  EXPECT_THROW(wilcoxon_signed_rank(a, std::vector<double>{1, 2}), InvalidArgument);
}

TEST(MidRanks, Ties) {
  EXPECT_EQ(mid_ranks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(PValues, MonotoneInEffect) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> b(30), noise(30);
  for (std::size_t i = 0; i < 30; ++i) {
    b[i] = z(gen);
    noise[i] = z(gen);
  }
  double prev_t = 2.0, prev_w = 2.0;
  for (double effect : {0.5, 0.2, 0.0, -0.2, -0.5, -1.0}) {
    std::vector<double> a(30);
    for (std::size_t i = 0; i < 30; ++i) a[i] = b[i] + effect + noise[i];
    const double pt = paired_t_one_tailed(a, b), pw = wilcoxon_signed_rank(a, b);
    EXPECT_GE(pt, 0.0);
    EXPECT_LE(pt, 1.0);
    EXPECT_GE(pw, 0.0);
    EXPECT_LE(pw, 1.0);
    EXPECT_LE(pt, prev_t);
    EXPECT_LE(pw, prev_w);
    prev_t = pt;
    prev_w = pw;
  }
}

TEST(CompareAndRank, SeparatedMethods) {
  const auto rep = compare_and_rank(separated(1), 0.05);
  ASSERT_EQ(rep.ranks.size(), 3u);
  EXPECT_EQ(rep.ranks[0].method, "low");
  EXPECT_EQ(rep.ranks[0].wins, 2);
  EXPECT_EQ(rep.ranks[1].method, "mid");
  EXPECT_EQ(rep.ranks[1].wins, 1);
  EXPECT_EQ(rep.ranks[2].method, "high");
  EXPECT_EQ(rep.ranks[2].wins, 0);
  EXPECT_EQ(rep.ranks[2].rank, 3);
}

TEST(CompareAndRank, IdenticalMethodsNeverWin) {
  auto s = separated(2);
  s[1].values = s[0].values;
  s[1].method = "copy";
  const auto rep = compare_and_rank(std::vector<RunSample>{s[0], s[1]}, 0.05);
  EXPECT_FALSE(rep.beats[0][1]);
  EXPECT_FALSE(rep.beats[1][0]);
  EXPECT_EQ(rep.test_used[0][1], TestKind::none);
  EXPECT_EQ(rep.p_values[0][1], 1.0);
}

TEST(CompareAndRank, NonNormalSampleUsesWilcoxon) {
  auto s = separated(3);
  std::mt19937_64 gen(3);
  std::exponential_distribution<double> e(1.0);
  for (double& v : s[2].values) v = 3.0 + 5.0 * std::pow(e(gen), 3);
  const auto rep = compare_and_rank(s, 0.05);
  ASSERT_FALSE(rep.normal[2]);
  ASSERT_TRUE(rep.normal[0] && rep.normal[1]);
  EXPECT_EQ(rep.test_used[0][2], TestKind::wilcoxon);
  EXPECT_EQ(rep.test_used[2][1], TestKind::wilcoxon);
  EXPECT_EQ(rep.test_used[0][1], TestKind::t);
}

TEST(CompareAndRank, AntisymmetricAndPermutationEquivariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = separated(seed);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, 0.5);
    s.push_back({"noisy", {}});
    for (int r = 0; r < 30; ++r) s.back().values.push_back(2.0 + z(gen));
    const auto rep = compare_and_rank(s, 0.05);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) ASSERT_FALSE(rep.beats[i][j] && rep.beats[j][i]);
    }
    const std::vector<std::size_t> perm{3, 0, 2, 1};
    std::vector<RunSample> shuffled;
    for (std::size_t k : perm) shuffled.push_back(s[k]);
    const auto other = compare_and_rank(shuffled, 0.05);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (std::size_t j = 0; j < perm.size(); ++j) {
        ASSERT_EQ(other.beats[i][j], rep.beats[perm[i]][perm[j]]);
        ASSERT_EQ(other.p_values[i][j], rep.p_values[perm[i]][perm[j]]);
      }
    }
    for (std::size_t r = 0; r < rep.ranks.size(); ++r) {
      ASSERT_EQ(other.ranks[r].method, rep.ranks[r].method);
      ASSERT_EQ(other.ranks[r].wins, rep.ranks[r].wins);
    }
  }
}

TEST(CompareAndRank, ConstantSampleCountsAsNonNormal) {
  std::vector<RunSample> s{{"flat", std::vector<double>(10, 1.0)}, {"ramp", {}}};
  for (int i = 0; i < 10; ++i) s[1].values.push_back(2.0 + 0.1 * i);
  const auto rep = compare_and_rank(s, 0.05);
  EXPECT_FALSE(rep.normal[0]);
  EXPECT_EQ(rep.test_used[0][1], TestKind::wilcoxon);
  EXPECT_TRUE(rep.beats[0][1]);
  EXPECT_THROW(compare_and_rank(std::vector<RunSample>{s[0]}, 0.05), InvalidArgument);
}
