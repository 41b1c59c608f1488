#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/io.hpp"
#include "gridfill/rng.hpp"

namespace fs = std::filesystem;
using namespace gridfill;

namespace {

int cmd_synth(std::uint64_t seed, int height, int width, int features, const fs::path& out) {
  const Region r = synth_region(seed, height, width, features);
  fs::create_directories(out);
  write_grid_csv(out / "grid.csv", r.truth);
  write_cube_csv(out / "features.csv", r.cube);
  std::cout << "wrote " << (out / "grid.csv").string() << " and " << (out / "features.csv").string() << '\n';
  return 0;
}

int cmd_run(const fs::path& config, const fs::path& out, unsigned threads, double alpha) {
  const ExperimentConfig cfg = load_config(config);
  const ExperimentResult res = run_experiment(cfg, threads);
  emit_report(res, out, alpha);
  std::cout << res.records.size() << " runs, " << res.failures.size() << " failures; report in " << out.string()
            << '\n';
  return 0;
}

struct InterpolateArgs {
  std::string method;
  fs::path grid;
  bool dense = false;
  fs::path features;
  double p_hidden = 0.3;
  std::uint64_t seed = 0;
  fs::path out;
  fs::path weights_in;
  fs::path weights_out;
  std::string neighbourhood = "rook";
};

int cmd_interpolate(const InterpolateArgs& a) {
  const Method method = parse_method(a.method);
  const Grid truth = a.dense ? read_dense_grid(a.grid) : read_grid_csv(a.grid);
  const FeatureCube raw = read_cube_csv(a.features);
  if (raw.height() != truth.height() || raw.width() != truth.width()) {
    throw InvalidArgument("grid and features differ in shape");
  }
  MethodParams params;
  params.nb = parse_neighbourhood(a.neighbourhood);
  const FeatureCube cube = preprocess(raw, params.preprocess);

  const MaskedGrid test = hide_observed(truth, a.p_hidden, a.seed);
  const MaskedGrid train = hide_observed(test.visible(), params.p_train, mix64(a.seed ^ 0x747261696e2d7370ULL));
  const bool mrp_weights = method == Method::o_mrp || method == Method::wp_mrp;
  if ((!a.weights_in.empty() || !a.weights_out.empty()) && !mrp_weights) {
    throw InvalidArgument("edge weights apply to o_mrp and wp_mrp only");
  }

  Grid pred(truth.height(), truth.width());
  if (mrp_weights) {
    std::optional<EdgeWeightSet> ws;
    if (!a.weights_in.empty()) {
      ws = read_edge_weights_csv(a.weights_in, truth.height(), truth.width(), params.nb);
    } else if (method == Method::o_mrp) {
      OmrpOptions o;
      o.p_train = params.p_train;
      o.es = params.es;
      ws = optimise_edge_weights(test, params.nb, params.mrp, o, a.seed).weights;
    } else {
      const WpMrpFit fit = wp_mrp_fit(train, cube, params.nb, params.mrp, {}, a.seed);
      ws = predict_edge_weights(fit.model, cube, params.nb);
    }
    if (!a.weights_out.empty()) write_edge_weights_csv(a.weights_out, *ws);
    pred = mrp_run_weighted(test, *ws, params.mrp).grid;
  } else {
    pred = run_method(method, test, cube, train, cube, params, a.seed).prediction;
  }

  if (a.dense) {
    write_dense_grid(a.out, pred);
  } else {
    write_grid_csv(a.out, pred);
  }
  std::cout << "hidden=" << test.hidden().size() << " mae=" << format_double(mae(pred, truth, test.hidden()))
            << '\n';
  return 0;
}

int cmd_rank(const fs::path& runs, double alpha) {
  const ExperimentResult res = read_runs_csv(runs);
  for (const auto& pr : rank_by_p(res, alpha)) {
    std::cout << "p=" << format_double(pr.p) << '\n';
    for (const auto& e : pr.report.ranks) {
      std::cout << "  " << e.rank << ". " << e.method << "  wins=" << e.wins << "  mean_mae=" << format_double(e.mean)
                << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap filling on raster grids: MRP interpolators and baselines"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int height = 16, width = 16, features = 4;
  fs::path synth_out;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic region (grid.csv, features.csv)");
  synth->add_option("--seed", seed);
  synth->add_option("--height", height);
  synth->add_option("--width", width);
  synth->add_option("--features", features);
  synth->add_option("--out", synth_out, "Output directory")->required();

  fs::path config, run_out;
  unsigned threads = 0;
  double alpha = 0.05;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("--config", config)->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Report directory")->required();
  run->add_option("--threads", threads, "Worker count (default: GRIDFILL_THREADS or all cores)");
  run->add_option("--alpha", alpha);

  InterpolateArgs ia;
  auto* interp = app.add_subcommand("interpolate", "Hide cells of one grid, fill them, report the error");
  interp->add_option("--method", ia.method)->required();
  interp->add_option("--grid", ia.grid)->required()->check(CLI::ExistingFile);
  interp->add_flag("--dense", ia.dense, "Grid is a dense matrix with NA for missing");
  interp->add_option("--features", ia.features)->required()->check(CLI::ExistingFile);
  interp->add_option("--p-hidden", ia.p_hidden)->check(CLI::Range(0.0, 1.0));
  interp->add_option("--seed", ia.seed);
  interp->add_option("--out", ia.out)->required();
  interp->add_option("--neighbourhood", ia.neighbourhood)->check(CLI::IsMember({"rook", "queen"}));
  interp->add_option("--weights-in", ia.weights_in, "Reuse edge weights (o_mrp, wp_mrp)")->check(CLI::ExistingFile);
  interp->add_option("--weights-out", ia.weights_out, "Save the edge weights used (o_mrp, wp_mrp)");

  fs::path runs;
  double rank_alpha = 0.05;
  auto* rank = app.add_subcommand("rank", "Per-p outperformance ranking from a runs.csv");
  rank->add_option("--runs", runs)->required()->check(CLI::ExistingFile);
  rank->add_option("--alpha", rank_alpha);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth(seed, height, width, features, synth_out);
    if (*run) return cmd_run(config, run_out, threads, alpha);
    if (*interp) return cmd_interpolate(ia);
    if (*rank) return cmd_rank(runs, rank_alpha);
  } catch (const std::exception& e) {
    std::cerr << "gridfill: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
