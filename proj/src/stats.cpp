#include "gridfill/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "gridfill/error.hpp"

namespace gridfill {

namespace {

// c[0] + c[1] x + c[2] x^2 + ...
double poly(std::initializer_list<double> c, double x) {
  double out = 0.0;
  double xp = 1.0;
  for (double ci : c) {
    out += ci * xp;
    xp *= x;
  }
  return out;
}

double normal_cdf(double z) { return boost::math::cdf(boost::math::normal(), z); }
double normal_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("paired samples differ in length (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

}  // namespace

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::t: return "t";
    case TestKind::wilcoxon: return "wilcoxon";
    case TestKind::none: return "none";
  }
  return "unknown";
}

ShapiroWilk shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw InvalidArgument("Shapiro-Wilk needs 3 <= n <= 5000, got n = " + std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw InvalidArgument("Shapiro-Wilk: sample has zero variance");

  // Half of the antisymmetric coefficient vector, largest first.
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  const auto an = static_cast<double>(n);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = boost::math::quantile(boost::math::normal(), (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly({0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056}, rsn) - m[0] / ssumm2;
    std::size_t first_scaled;
    double fac;
    if (n > 5) {
      const double a2 = -m[1] / ssumm2 + poly({0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633}, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
      first_scaled = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
      first_scaled = 1;
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the data and the coefficients.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }
  const double coef_mean = std::accumulate(coef.begin(), coef.end(), 0.0) / an;
  double x_mean = 0.0;
  for (double v : x) x_mean += v / range;
  x_mean /= an;
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - coef_mean;
    const double dx = x[i] / range - x_mean;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = 1.0 - w1;

  if (n == 3) {
    const double p = 6.0 / M_PI * (std::asin(std::sqrt(w)) - M_PI / 3.0);
    return {w, std::clamp(p, 0.0, 1.0)};
  }

  double y = std::log(w1);
  double mean, sd;
  if (n <= 11) {
    const double gamma = poly({-2.273, 0.459}, an);
    if (y >= gamma) return {w, 1e-99};
    y = -std::log(gamma - y);
    mean = poly({0.544, -0.39978, 0.025054, -6.714e-4}, an);
    sd = std::exp(poly({1.3822, -0.77857, 0.062767, -0.0020322}, an));
  } else {
    const double ln_n = std::log(an);
    mean = poly({-1.5861, -0.31082, -0.083751, 0.0038915}, ln_n);
    sd = std::exp(poly({-0.4803, -0.082676, 0.0030302}, ln_n));
  }
  return {w, std::clamp(normal_sf((y - mean) / sd), 0.0, 1.0)};
}

double paired_t_one_tailed(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const std::size_t n = a.size();
  if (n < 2) throw InvalidArgument("paired t-test needs at least two pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  if (!(var > 0.0)) throw InvalidArgument("paired t-test: differences have zero variance");
  const double t = mean / std::sqrt(var / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return std::clamp(boost::math::cdf(dist, t), 0.0, 1.0);
}

std::vector<double> mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> wilcoxon_exact_null(std::span<const double> ranks) {
  // Doubled mid-ranks are integers, so the distribution lives on integer sums.
  std::vector<long> doubled;
  long total = 0;
  for (double r : ranks) {
    doubled.push_back(std::lround(2.0 * r));
    total += doubled.back();
  }
  std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
  dist[0] = 1.0;
  long reach = 0;
  for (long r : doubled) {
    // Each rank enters W+ with probability 1/2.
    for (long s = reach; s >= 0; --s) {
      const double half = 0.5 * dist[static_cast<std::size_t>(s)];
      dist[static_cast<std::size_t>(s)] = half;
      dist[static_cast<std::size_t>(s + r)] += half;
    }
    reach += r;
  }
  return dist;
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  if (d.empty()) throw InvalidArgument("Wilcoxon test: all differences are zero");

  std::vector<double> magnitude(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) magnitude[i] = std::abs(d[i]);
  const std::vector<double> ranks = mid_ranks(magnitude);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0) w_plus += ranks[i];
  }

  const auto n = static_cast<double>(d.size());
  if (d.size() < 20) {
    const auto dist = wilcoxon_exact_null(ranks);
    const long limit = std::lround(2.0 * w_plus);
    double p = 0.0;
    for (long s = 0; s <= limit; ++s) p += dist[static_cast<std::size_t>(s)];
    return std::clamp(p, 0.0, 1.0);
  }

  std::vector<double> sorted = magnitude;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double z = (w_plus - mean + 0.5) / std::sqrt(var);
  return std::clamp(normal_cdf(z), 0.0, 1.0);
}

SignificanceReport compare_and_rank(std::span<const RunSample> samples, double alpha) {
  if (samples.size() < 2) throw InvalidArgument("compare_and_rank needs at least two samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  const std::size_t m = samples.size();
  const std::size_t n = samples.front().values.size();
  for (const auto& s : samples) {
    if (s.values.size() != n) throw InvalidArgument("samples must have equal lengths");
    if (s.values.size() < 2) throw InvalidArgument("samples need at least two runs");
  }

  SignificanceReport rep;
  rep.alpha = alpha;
  rep.beats.assign(m, std::vector<bool>(m, false));
  rep.test_used.assign(m, std::vector<TestKind>(m, TestKind::none));
  rep.p_values.assign(m, std::vector<double>(m, 1.0));
  for (const auto& s : samples) {
    rep.methods.push_back(s.method);
    bool normal = false;
    try {
      normal = s.values.size() >= 3 && shapiro_wilk(s.values).p_value >= alpha;
    } catch (const InvalidArgument&) {
      normal = false;  // constant sample
    }
    rep.normal.push_back(normal);
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto& a = samples[i].values;
      const auto& b = samples[j].values;
      if (std::equal(a.begin(), a.end(), b.begin())) continue;  // p = 1, no test

      double p = 1.0;
      TestKind used = TestKind::wilcoxon;
      if (rep.normal[i] && rep.normal[j]) {
        try {
          p = paired_t_one_tailed(a, b);
          used = TestKind::t;
        } catch (const InvalidArgument&) {
          used = TestKind::wilcoxon;  // constant non-zero shift
        }
      }
      if (used == TestKind::wilcoxon) p = wilcoxon_signed_rank(a, b);
      rep.test_used[i][j] = used;
      rep.p_values[i][j] = p;
      rep.beats[i][j] = p < alpha;
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    RankEntry e;
    e.method = samples[i].method;
    e.wins = static_cast<int>(std::count(rep.beats[i].begin(), rep.beats[i].end(), true));
    e.mean = std::accumulate(samples[i].values.begin(), samples[i].values.end(), 0.0) /
             static_cast<double>(n);
    rep.ranks.push_back(e);
  }
  std::sort(rep.ranks.begin(), rep.ranks.end(), [](const RankEntry& x, const RankEntry& y) {
    if (x.wins != y.wins) return x.wins > y.wins;
    if (x.mean != y.mean) return x.mean < y.mean;
    return x.method < y.method;
  });
  for (std::size_t r = 0; r < rep.ranks.size(); ++r) rep.ranks[r].rank = static_cast<int>(r + 1);
  return rep;
}

}  // namespace gridfill
