#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/idw.hpp"
#include "gridfill/kriging.hpp"
#include "gridfill/spatial_regression.hpp"

namespace gridfill {

namespace {

constexpr std::array kMethods{Method::sd_mrp, Method::o_mrp,    Method::wp_mrp, Method::krige_ok,
                              Method::krige_uk, Method::idw,    Method::regression, Method::sar,
                              Method::ma,     Method::arma};

OmrpOptions omrp_options(const MethodParams& params) {
  OmrpOptions o;
  o.p_train = params.p_train;
  o.es = params.es;
  o.gamma_candidates = params.gamma_candidates;
  return o;
}

double max_lag(const MethodParams& params, const Grid& g) {
  if (params.variogram_max_lag > 0.0) return params.variogram_max_lag;
  return 0.5 * std::hypot(static_cast<double>(g.height()), static_cast<double>(g.width()));
}

VariogramModel fit_on(const Grid& data, VariogramKind kind, const MethodParams& params) {
  return fit_variogram(empirical_semivariance(data, params.variogram_bin_width, max_lag(params, data)),
                       kind);
}

// Picks the variogram kind whose kriging of the training split has the
// lowest error, then refits that kind on the test region's visible cells.
Grid krige_selected(const MaskedGrid& test, const MaskedGrid& train, KrigingMode mode,
                    const MethodParams& params) {
  const KrigingOptions opts{params.kriging_neighbours, mode, params.kriging_unbiased};
  if (params.variogram_kinds.empty()) throw InvalidArgument("no variogram kinds configured");
  VariogramKind best = params.variogram_kinds.front();
  double best_loss = std::numeric_limits<double>::infinity();
  std::string last_error;
  for (VariogramKind kind : params.variogram_kinds) {
    try {
      const double loss = mae(krige(train, fit_on(train.visible(), kind, params), opts), train.truth(),
                              train.hidden());
      if (loss < best_loss) {
        best_loss = loss;
        best = kind;
      }
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!std::isfinite(best_loss)) throw Error("no variogram kind could be fitted: " + last_error);
  return krige(test, fit_on(test.visible(), best, params), opts);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::sd_mrp: return "sd_mrp";
    case Method::o_mrp: return "o_mrp";
    case Method::wp_mrp: return "wp_mrp";
    case Method::krige_ok: return "krige_ok";
    case Method::krige_uk: return "krige_uk";
    case Method::idw: return "idw";
    case Method::regression: return "regression";
    case Method::sar: return "sar";
    case Method::ma: return "ma";
    case Method::arma: return "arma";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (Method m : kMethods) {
    if (to_string(m) == text) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

std::span<const Method> all_methods() { return kMethods; }

MethodOutput run_method(Method m, const MaskedGrid& test, const FeatureCube& test_cube,
                        const MaskedGrid& train, const FeatureCube& train_cube,
                        const MethodParams& params, std::uint64_t seed) {
  switch (m) {
    case Method::sd_mrp: {
      const double gamma = tune_gamma(train, params.nb, params.mrp, params.gamma_candidates);
      auto r = sd_mrp_run(test, gamma, params.nb, params.mrp);
      return {std::move(r.grid), r.iterations};
    }
    case Method::o_mrp: {
      const OmrpResult opt = optimise_edge_weights(test, params.nb, params.mrp, omrp_options(params), seed);
      auto r = mrp_run_weighted(test, opt.weights, params.mrp);
      return {std::move(r.grid), r.iterations};
    }
    case Method::wp_mrp: {
      const WpMrpOptions opts{omrp_options(params), params.weight_ridge};
      const WpMrpFit fit = wp_mrp_fit(train, train_cube, params.nb, params.mrp, opts, seed);
      auto r = wp_mrp_run(test, test_cube, fit.model, params.nb, params.mrp);
      return {std::move(r.grid), r.iterations};
    }
    case Method::krige_ok: return {krige_selected(test, train, KrigingMode::ordinary, params)};
    case Method::krige_uk: return {krige_selected(test, train, KrigingMode::universal, params)};
    case Method::idw: return {idw(test, params.idw_power)};
    case Method::regression: return {regression_interp(test, test_cube, params.ridge_lambda)};
    case Method::sar:
      return {spatial_regression_interp(test, test_cube, params.nb, SpatialKind::sar, params.ridge_lambda)};
    case Method::ma:
      return {spatial_regression_interp(test, test_cube, params.nb, SpatialKind::ma, params.ridge_lambda)};
    case Method::arma:
      return {spatial_regression_interp(test, test_cube, params.nb, SpatialKind::arma, params.ridge_lambda)};
  }
  throw InvalidArgument("unknown method");
}

}  // namespace gridfill
