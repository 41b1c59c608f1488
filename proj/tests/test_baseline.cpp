#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/idw.hpp"
#include "gridfill/kriging.hpp"
#include "gridfill/spatial_regression.hpp"
#include "gridfill/variogram.hpp"

using namespace gridfill;

namespace {

Grid random_grid(int h, int w, std::uint64_t seed, double missing_share) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::bernoulli_distribution gone(missing_share);
  Grid g(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double v = u(gen);
      if (!gone(gen)) g.set({i, j}, v);
    }
  }
  return g;
}

// Straight enumeration of every unordered pair of observed cells.
std::map<long, std::pair<double, std::pair<double, std::size_t>>> semivariance_oracle(const Grid& g, double bw,
                                                                                      double max_lag) {
  std::map<long, std::pair<double, std::pair<double, std::size_t>>> bins;  // bin -> (sum sq, (sum d, n))
  for (int a = 0; a < static_cast<int>(g.size()); ++a) {
    for (int b = a + 1; b < static_cast<int>(g.size()); ++b) {
      const Cell ca = g.cell(static_cast<std::size_t>(a)), cb = g.cell(static_cast<std::size_t>(b));
      if (!g.observed(ca) || !g.observed(cb)) continue;
      const double d = std::sqrt(std::pow(ca.h - cb.h, 2) + std::pow(ca.w - cb.w, 2));
      if (d > max_lag) continue;
      auto& bin = bins[static_cast<long>(std::ceil(d / bw))];
      bin.first += std::pow(g.value(ca) - g.value(cb), 2);
      bin.second.first += d;
      bin.second.second += 1;
    }
  }
  return bins;
}

EmpiricalSemivariance bins_from(const VariogramModel& m, double step, double last) {
  EmpiricalSemivariance e;
  for (double d = step; d <= last + 1e-12; d += step) e.bins.push_back({d, m(d), 10});
  return e;
}

MaskedGrid synth_mask(std::uint64_t seed, int side, double p) {
  const Region r = synth_region(seed, side, side, 3);
  return hide_values(r.truth, p, seed + 1);
}

void expect_anchored_and_complete(const MaskedGrid& mg, const Grid& out) {
  ASSERT_TRUE(out.fully_observed());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mg.visible().observed(i)) { ASSERT_EQ(out.value(i), mg.visible().value(i)); }
  }
}

}  // namespace

TEST(Semivariance, HandExamples) {
  const std::vector<double> two{0, 2};
  const auto e = empirical_semivariance(Grid::from_dense(1, 2, two), 1.0, 5.0);
  ASSERT_EQ(e.bins.size(), 1u);
  EXPECT_DOUBLE_EQ(e.bins[0].gamma, 2.0);
  EXPECT_EQ(e.bins[0].pair_count, 1u);

  const std::vector<double> three{0, 1, 2};
  const auto f = empirical_semivariance(Grid::from_dense(1, 3, three), 1.0, 1.0);
  ASSERT_EQ(f.bins.size(), 1u);
  EXPECT_DOUBLE_EQ(f.bins[0].distance, 1.0);
  EXPECT_DOUBLE_EQ(f.bins[0].gamma, 0.5);
}

TEST(Semivariance, ConstantFieldIsZero) {
  const std::vector<double> k(36, 4.2);
  for (const auto& bin : empirical_semivariance(Grid::from_dense(6, 6, k), 0.7, 10.0).bins) {
    EXPECT_EQ(bin.gamma, 0.0);
  }
}

TEST(Semivariance, MatchesPairEnumeration) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Grid g = random_grid(5 + static_cast<int>(seed), 7, seed, 0.3);
    for (double bw : {0.5, 1.0, 1.7}) {
      const auto got = empirical_semivariance(g, bw, 6.0);
      const auto want = semivariance_oracle(g, bw, 6.0);
      ASSERT_EQ(got.bins.size(), want.size());
      std::size_t i = 0;
      for (const auto& [_, bin] : want) {
        const double n = static_cast<double>(bin.second.second);
        EXPECT_NEAR(got.bins[i].gamma, bin.first / (2.0 * n), 1e-10);
        EXPECT_NEAR(got.bins[i].distance, bin.second.first / n, 1e-10);
        EXPECT_EQ(got.bins[i].pair_count, bin.second.second);
        ++i;
      }
    }
  }
}

TEST(FitVariogram, RecoversLinearModel) {
  // Slope 0.5 up to range 4; bins continue past the range onto the plateau.
  const VariogramModel truth{VariogramKind::linear, 0.0, 2.0, 4.0};
  const VariogramModel m = fit_variogram(bins_from(truth, 0.5, 8.0), VariogramKind::linear);
  EXPECT_NEAR(m.nugget, 0.0, 1e-3);
  EXPECT_NEAR(m.sill, 2.0, 1e-3);
  EXPECT_NEAR(m.range, 4.0, 1e-3);
}

TEST(FitVariogram, RecoversOtherKinds) {
  for (VariogramKind kind : {VariogramKind::linear, VariogramKind::exponential, VariogramKind::gaussian}) {
    const VariogramModel truth{kind, 0.3, 2.3, 3.5};
    const VariogramModel m = fit_variogram(bins_from(truth, 0.5, 10.0), kind);
    EXPECT_NEAR(m.nugget, truth.nugget, 1e-3) << to_string(kind);
    EXPECT_NEAR(m.sill, truth.sill, 1e-3) << to_string(kind);
    EXPECT_NEAR(m.range, truth.range, 1e-3) << to_string(kind);
  }
}

TEST(FitVariogram, FlatBins) {
  EmpiricalSemivariance e;
  for (int i = 1; i <= 6; ++i) e.bins.push_back({static_cast<double>(i), 1.7, 5});
  for (VariogramKind kind : {VariogramKind::linear, VariogramKind::exponential, VariogramKind::gaussian}) {
    const VariogramModel m = fit_variogram(e, kind);
    EXPECT_NEAR(m.nugget, 1.7, 1e-9);
    EXPECT_NEAR(m.sill, 1.7, 1e-9);
  }
}

TEST(FitVariogram, NeedsThreeBins) {
  EmpiricalSemivariance e;
  e.bins = {{1, 1, 1}, {2, 2, 1}};
  EXPECT_THROW(fit_variogram(e, VariogramKind::linear), InvalidArgument);
}

TEST(FitVariogram, SseIsMinimalAtFit) {
  const Grid g = synth_region(4, 12, 12, 2).truth;
  const auto e = empirical_semivariance(g, 1.0, 8.0);
  for (VariogramKind kind : {VariogramKind::linear, VariogramKind::exponential, VariogramKind::gaussian}) {
    const VariogramModel m = fit_variogram(e, kind);
    const double best = variogram_sse(e, m);
    for (double scale : {0.9, 1.1}) {
      VariogramModel r = m;
      r.range *= scale;
      EXPECT_LE(best, variogram_sse(e, r) + 1e-12);
      VariogramModel s = m;
      s.sill = m.nugget + (m.sill - m.nugget) * scale;
      EXPECT_LE(best, variogram_sse(e, s) + 1e-12);
    }
  }
}

TEST(Kriging, EquidistantPairGivesMidpoint) {
  const std::vector<std::optional<double>> v{2.0, std::nullopt, 4.0};
  const Grid g = Grid::from_values(1, 3, v);
  for (VariogramKind kind : {VariogramKind::linear, VariogramKind::exponential, VariogramKind::gaussian}) {
    const Grid out = krige(g, VariogramModel{kind, 0.1, 1.0, 2.0});
    EXPECT_NEAR(out.value(Cell{0, 1}), 3.0, 1e-12);
  }
}

TEST(Kriging, IdentitySystemWithoutConstraint) {
  const Eigen::Vector2d w = solve_kriging_weights(Eigen::Matrix2d::Identity(), Eigen::Vector2d(0.5, 0.5), false);
  EXPECT_NEAR(w(0), 0.5, 1e-15);
  EXPECT_NEAR(w(1), 0.5, 1e-15);
  // The zero matrix is rescued by the 1e-10 diagonal jitter; diag(0, -1e-10) is singular either way.
  EXPECT_NO_THROW(solve_kriging_weights(Eigen::Matrix2d::Zero(), Eigen::Vector2d(1, 1), false));
  EXPECT_THROW(solve_kriging_weights(Eigen::Vector2d(0.0, -1e-10).asDiagonal().toDenseMatrix(), Eigen::Vector2d(1, 1), false),
               SingularSystem);
}

TEST(Kriging, UniversalConstantField) {
  std::vector<std::optional<double>> v(25, 3.25);
  for (std::size_t i : {3u, 7u, 12u, 20u}) v[i] = std::nullopt;
  const Grid g = Grid::from_values(5, 5, v);
  const Grid out = krige(g, VariogramModel{VariogramKind::exponential, 0.0, 1.0, 3.0}, {8, KrigingMode::universal, true});
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.value(i), 3.25, 1e-9);
}

TEST(Kriging, ExactAtVisibleCellsAndWeightsSumToOne) {
  const MaskedGrid mg = synth_mask(7, 16, 0.4);
  const VariogramModel model{VariogramKind::exponential, 0.0, 2.0, 6.0};
  const KrigingPredictor pred(mg.visible(), model, 16, true);
  for (std::size_t i = 0, seen = 0; i < mg.visible().size() && seen < 40; ++i) {
    if (!mg.visible().observed(i)) continue;
    ++seen;
    const KrigingEstimate est = pred.predict(mg.visible().cell(i));
    EXPECT_NEAR(est.value, mg.visible().value(i), 1e-8);
    EXPECT_LT(std::abs(est.weights.sum() - 1.0), 1e-10);
  }
  for (Cell c : mg.hidden()) EXPECT_LT(std::abs(pred.predict(c).weights.sum() - 1.0), 1e-10);
}

TEST(Kriging, NeighbourSelection) {
  const std::vector<double> v(9, 1.0);
  const KrigingPredictor p(Grid::from_dense(3, 3, v), VariogramModel{}, 3, true);
  // (1,1) itself, then the first two rook neighbours in row-major order.
  EXPECT_EQ(p.nearest({1, 1}), (std::vector<std::size_t>{4, 1, 3}));
  const KrigingPredictor all(Grid::from_dense(3, 3, v), VariogramModel{}, 50, true);
  EXPECT_EQ(all.nearest({0, 0}).size(), 9u);
  EXPECT_THROW(KrigingPredictor(Grid(2, 2), VariogramModel{}, 3, true), InvalidArgument);
}

TEST(Idw, HandExample) {
  // Query at column 1: source 10 at distance 1, source 2 at distance 3.
  const std::vector<std::optional<double>> v{10.0, std::nullopt, std::nullopt, std::nullopt, 2.0};
  const Grid g = Grid::from_values(1, 5, v);
  for (auto b : {simd::Backend::scalar, simd::best_backend()}) {
    EXPECT_NEAR(idw(g, 1.0, b).value(Cell{0, 1}), 8.0, 1e-12);
  }
  const std::vector<Cell> sources{{0, 0}, {0, 4}};
  const auto w = idw_weights({0, 1}, sources, 1.0);
  EXPECT_NEAR(w[0], 0.75, 1e-15);
  EXPECT_NEAR(w[1], 0.25, 1e-15);
  EXPECT_THROW(idw_weights({0, 0}, sources, 1.0), InvalidArgument);
}

TEST(Idw, SingleSourceAndSymmetry) {
  Grid one(3, 3);
  one.set({1, 1}, 7.0);
  const Grid out = idw(one, 2.0);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out.value(i), 7.0);

  const std::vector<std::optional<double>> v{4.0, std::nullopt, 6.0};
  EXPECT_NEAR(idw(Grid::from_values(1, 3, v), 2.0).value(Cell{0, 1}), 5.0, 1e-12);
}

TEST(Idw, ConvexCombination) {
  std::mt19937_64 gen(21);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Grid g = random_grid(9, 11, seed, 0.6);
    double lo = INFINITY, hi = -INFINITY;
    std::vector<Cell> sources;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.observed(i)) continue;
      lo = std::min(lo, g.value(i));
      hi = std::max(hi, g.value(i));
      sources.push_back(g.cell(i));
    }
    for (double power : {0.5, 1.0, 2.0, 3.0}) {
      const Grid out = idw(g, power);
      for (std::size_t i = 0; i < out.size(); ++i) {
        ASSERT_GE(out.value(i), lo);
        ASSERT_LE(out.value(i), hi);
        if (g.observed(i)) continue;
        const auto w = idw_weights(g.cell(i), sources, power);
        double s = 0.0;
        for (double x : w) s += x;
        ASSERT_NEAR(s, 1.0, 1e-12);
      }
    }
  }
}

TEST(RegressionInterp, Examples) {
  const FeatureCube cube(1, 4, {"x"}, {1, 2, 3, 5});
  const std::vector<double> y{2, 4, 6, 10};
  const MaskedGrid mg = MaskedGrid::from_hidden(Grid::from_dense(1, 4, y), {{0, 3}});
  EXPECT_NEAR(regression_interp(mg, cube, 0.0).value(Cell{0, 3}), 10.0, 1e-10);

  const std::vector<double> k(4, 6.5);
  const MaskedGrid kg = MaskedGrid::from_hidden(Grid::from_dense(1, 4, k), {{0, 0}, {0, 2}});
  const Grid out = regression_interp(kg, cube, 1e-8);
  EXPECT_NEAR(out.value(Cell{0, 0}), 6.5, 1e-8);
  EXPECT_NEAR(out.value(Cell{0, 2}), 6.5, 1e-8);
}

TEST(RegressionInterp, ExactClosedForm) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> data(64 * 2), y(64);
  for (std::size_t i = 0; i < 64; ++i) {
    data[2 * i] = u(gen);
    data[2 * i + 1] = u(gen);
    y[i] = 1.0 + data[2 * i] - data[2 * i + 1];
  }
  const FeatureCube cube(8, 8, {"a", "b"}, data);
  const MaskedGrid mg = hide_values(Grid::from_dense(8, 8, y), 0.5, 3);
  const Grid out = regression_interp(mg, cube, 0.0);
  for (Cell c : mg.hidden()) EXPECT_NEAR(out.value(c), mg.truth().value(c), 1e-8);
}

TEST(SpatialRegression, ConstantFieldAllKinds) {
  const FeatureCube cube = synth_region(2, 6, 6, 3).cube;
  const FeatureCube pre = preprocess(cube, {false, true, true});
  const std::vector<double> k(36, -1.5);
  const MaskedGrid mg = hide_values(Grid::from_dense(6, 6, k), 0.3, 1);
  for (SpatialKind kind : {SpatialKind::sar, SpatialKind::ma, SpatialKind::arma}) {
    const Grid out = spatial_regression_interp(mg, pre, Neighbourhood::rook, kind, 1e-8);
    for (Cell c : mg.hidden()) EXPECT_NEAR(out.value(c), -1.5, 1e-6) << to_string(kind);
  }
}

TEST(SpatialRegression, LagColumnCounts) {
  const Region r = synth_region(3, 8, 8, 4);
  const MaskedGrid mg = hide_values(r.truth, 0.3, 2);
  const std::vector<Cell> all = [&] {
    std::vector<Cell> c;
    for (std::size_t i = 0; i < mg.truth().size(); ++i) c.push_back(mg.truth().cell(i));
    return c;
  }();
  const auto base = design_matrix(r.cube, all).cols();
  auto cols = [&](SpatialKind k) { return spatial_design_matrix(mg, r.cube, Neighbourhood::rook, k, 1e-8).cols(); };
  EXPECT_EQ(cols(SpatialKind::sar), base + 1);
  EXPECT_EQ(cols(SpatialKind::ma), base + 1);
  EXPECT_EQ(cols(SpatialKind::arma), base + 2);
}

TEST(SpatialRegression, ZeroedLagEqualsBasicRegression) {
  const Region r = synth_region(5, 10, 10, 3);
  const FeatureCube cube = preprocess(r.cube, {false, true, true});
  const MaskedGrid mg = hide_values(r.truth, 0.4, 9);
  Eigen::MatrixXd design = spatial_design_matrix(mg, cube, Neighbourhood::queen, SpatialKind::sar, 0.0);
  design.col(design.cols() - 1).setZero();
  // A zero column leaves the normal equations singular at lambda 0; a tiny
  // ridge pins its coefficient to 0 while the rest match basic regression.
  const Grid lagged = fit_predict_design(mg, design, 1e-12);
  const Grid basic = regression_interp(mg, cube, 1e-12);
  for (Cell c : mg.hidden()) EXPECT_NEAR(lagged.value(c), basic.value(c), 1e-8);
}

TEST(SpatialRegression, UncorrelatedNoiseMatchesBasic) {
  // Pure noise target: the lag term carries no signal, so SAR and basic
  // regression give nearly the same hidden-cell predictions.
  std::mt19937_64 gen(8);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> y(400);
  for (double& v : y) v = z(gen);
  const FeatureCube cube = preprocess(synth_region(8, 20, 20, 3).cube, {false, true, true});
  const MaskedGrid mg = hide_values(Grid::from_dense(20, 20, y), 0.3, 4);
  const Grid sar = spatial_regression_interp(mg, cube, Neighbourhood::rook, SpatialKind::sar, 1e-8);
  const Grid basic = regression_interp(mg, cube, 1e-8);
  double diff = 0.0;
  for (Cell c : mg.hidden()) diff += std::abs(sar.value(c) - basic.value(c));
  diff /= static_cast<double>(mg.hidden().size());
  EXPECT_LT(diff, 0.1);
  EXPECT_LT(std::abs(mae(sar, mg.truth(), mg.hidden()) - mae(basic, mg.truth(), mg.hidden())), 0.05);
}

TEST(Baselines, AnchoredAndComplete) {
  for (double p : {0.1, 0.5, 0.9}) {
    const Region r = synth_region(11, 12, 12, 4);
    const FeatureCube cube = preprocess(r.cube, {false, true, true});
    const MaskedGrid mg = hide_values(r.truth, p, 3);
    const VariogramModel model = fit_variogram(empirical_semivariance(mg, 1.0, 8.0), VariogramKind::exponential);
    expect_anchored_and_complete(mg, krige(mg, model));
    expect_anchored_and_complete(mg, krige(mg, model, {16, KrigingMode::universal, true}));
    expect_anchored_and_complete(mg, krige(mg, model, {16, KrigingMode::ordinary, false}));
    expect_anchored_and_complete(mg, idw(mg, 2.0));
    expect_anchored_and_complete(mg, regression_interp(mg, cube, 1e-8));
    for (SpatialKind k : {SpatialKind::sar, SpatialKind::ma, SpatialKind::arma}) {
      expect_anchored_and_complete(mg, spatial_regression_interp(mg, cube, Neighbourhood::rook, k, 1e-8));
    }
  }
}
