#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/io.hpp"

namespace gridfill {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

std::uint64_t read_u64(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw InvalidArgument(where + " must be a non-negative integer");
}

RegionRef parse_region(const json& j, const std::filesystem::path& base, const std::string& where) {
  only_keys(j, {"synth", "grid", "features", "dense"}, where);
  RegionRef ref;
  if (j.contains("synth")) {
    if (j.contains("grid") || j.contains("features")) {
      throw InvalidArgument(where + " mixes a synthetic region with files");
    }
    const json& s = j.at("synth");
    only_keys(s, {"seed", "height", "width", "features"}, where + ".synth");
    SynthSpec spec;
    if (s.contains("seed")) spec.seed = read_u64(s.at("seed"), where + ".synth.seed");
    read(s, "height", spec.height);
    read(s, "width", spec.width);
    read(s, "features", spec.n_features);
    ref.synth = spec;
    return ref;
  }
  if (!j.contains("grid") || !j.contains("features")) {
    throw InvalidArgument(where + " needs either 'synth' or both 'grid' and 'features'");
  }
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
  };
  ref.grid = resolve(j.at("grid").get<std::string>());
  ref.features = resolve(j.at("features").get<std::string>());
  read(j, "dense", ref.dense);
  return ref;
}

void parse_params(const json& j, MethodParams& p) {
  only_keys(j, {"neighbourhood", "mrp", "p_train", "o_mrp", "wp_mrp", "idw", "kriging", "regression",
                "preprocess"},
            "params");
  if (j.contains("neighbourhood")) p.nb = parse_neighbourhood(j.at("neighbourhood").get<std::string>());
  read(j, "p_train", p.p_train);
  if (j.contains("mrp")) {
    const json& m = j.at("mrp");
    only_keys(m, {"aggregation", "max_iter", "tol", "gamma_candidates"}, "params.mrp");
    if (m.contains("aggregation")) p.mrp.aggregation = parse_aggregation(m.at("aggregation").get<std::string>());
    read(m, "max_iter", p.mrp.max_iter);
    read(m, "tol", p.mrp.tol);
    read(m, "gamma_candidates", p.gamma_candidates);
  }
  if (j.contains("o_mrp")) {
    const json& e = j.at("o_mrp");
    only_keys(e, {"budget_iters", "population", "sigma_start", "sigma_end", "mutation_rate", "patience",
                  "min_improvement"},
              "params.o_mrp");
    read(e, "budget_iters", p.es.budget_iters);
    read(e, "population", p.es.population);
    read(e, "sigma_start", p.es.sigma_start);
    read(e, "sigma_end", p.es.sigma_end);
    read(e, "mutation_rate", p.es.mutation_rate);
    read(e, "patience", p.es.patience);
    read(e, "min_improvement", p.es.min_improvement);
  }
  if (j.contains("wp_mrp")) {
    only_keys(j.at("wp_mrp"), {"ridge_lambda"}, "params.wp_mrp");
    read(j.at("wp_mrp"), "ridge_lambda", p.weight_ridge);
  }
  if (j.contains("idw")) {
    only_keys(j.at("idw"), {"power"}, "params.idw");
    read(j.at("idw"), "power", p.idw_power);
  }
  if (j.contains("kriging")) {
    const json& k = j.at("kriging");
    only_keys(k, {"n_neighbours", "unbiased", "variograms", "bin_width", "max_lag"}, "params.kriging");
    read(k, "n_neighbours", p.kriging_neighbours);
    read(k, "unbiased", p.kriging_unbiased);
    read(k, "bin_width", p.variogram_bin_width);
    read(k, "max_lag", p.variogram_max_lag);
    if (k.contains("variograms")) {
      p.variogram_kinds.clear();
      for (const auto& v : k.at("variograms")) p.variogram_kinds.push_back(parse_variogram_kind(v.get<std::string>()));
    }
  }
  if (j.contains("regression")) {
    only_keys(j.at("regression"), {"ridge_lambda"}, "params.regression");
    read(j.at("regression"), "ridge_lambda", p.ridge_lambda);
  }
  if (j.contains("preprocess")) {
    const json& q = j.at("preprocess");
    only_keys(q, {"log_transform", "standardise", "drop_constant"}, "params.preprocess");
    read(q, "log_transform", p.preprocess.log_transform);
    read(q, "standardise", p.preprocess.standardise);
    read(q, "drop_constant", p.preprocess.drop_constant);
  }
}

}  // namespace

std::string_view to_string(Condition c) {
  return c == Condition::same_region ? "same_region" : "transfer";
}

Condition parse_condition(std::string_view text) {
  if (text == "same_region") return Condition::same_region;
  if (text == "transfer") return Condition::transfer;
  throw InvalidArgument("unknown condition '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw InvalidArgument("config lists no methods");
  const std::set<Method> unique(methods.begin(), methods.end());
  if (unique.size() != methods.size()) throw InvalidArgument("config lists a method twice");
  if (p_values.empty()) throw InvalidArgument("config lists no p values");
  for (double p : p_values) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p values must lie in (0, 1)");
  }
  if (p_values.size() >= (1u << 16)) throw InvalidArgument("too many p values");
  if (n_runs < 1) throw InvalidArgument("n_runs must be positive");
  if (condition == Condition::transfer) {
    if (!train_region) throw InvalidArgument("transfer needs a train_region");
    if (*train_region == test_region) throw InvalidArgument("transfer needs distinct train and test regions");
  }
  if (!(params.p_train > 0.0 && params.p_train < 1.0)) throw InvalidArgument("p_train must lie in (0, 1)");
  if (params.gamma_candidates.empty()) throw InvalidArgument("no gamma candidates");
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    only_keys(j, {"methods", "p_values", "n_runs", "condition", "train_region", "test_region", "seed", "params"},
              "config");
    if (!j.contains("methods")) throw InvalidArgument("config needs 'methods'");
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    read(j, "p_values", cfg.p_values);
    read(j, "n_runs", cfg.n_runs);
    if (j.contains("condition")) cfg.condition = parse_condition(j.at("condition").get<std::string>());
    if (!j.contains("test_region")) throw InvalidArgument("config needs 'test_region'");
    cfg.test_region = parse_region(j.at("test_region"), base_dir, "test_region");
    if (j.contains("train_region")) cfg.train_region = parse_region(j.at("train_region"), base_dir, "train_region");
    if (j.contains("seed")) cfg.seed = read_u64(j.at("seed"), "seed");
    if (j.contains("params")) parse_params(j.at("params"), cfg.params);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config has a field of the wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

Region load_region(const RegionRef& ref) {
  if (ref.synth) return synth_region(ref.synth->seed, ref.synth->height, ref.synth->width, ref.synth->n_features);
  Grid g = ref.dense ? read_dense_grid(ref.grid) : read_grid_csv(ref.grid);
  FeatureCube cube = read_cube_csv(ref.features);
  if (cube.height() != g.height() || cube.width() != g.width()) {
    throw IoError("grid " + ref.grid.string() + " and features " + ref.features.string() + " differ in shape");
  }
  return {std::move(g), std::move(cube)};
}

}  // namespace gridfill
