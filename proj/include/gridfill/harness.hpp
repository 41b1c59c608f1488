#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridfill/features.hpp"
#include "gridfill/grid.hpp"
#include "gridfill/mrp.hpp"
#include "gridfill/omrp.hpp"
#include "gridfill/stats.hpp"
#include "gridfill/variogram.hpp"

namespace gridfill {

enum class Method { sd_mrp, o_mrp, wp_mrp, krige_ok, krige_uk, idw, regression, sar, ma, arma };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);
std::span<const Method> all_methods();

struct Region {
  Grid truth;
  FeatureCube cube;
};

/// Seeded synthetic region: a smooth field of three sinusoidal modes plus
/// noise at 5% of its range, and count-like features. Features 0 and 1 are
/// noisy increasing and decreasing functions of the field; the rest are
/// noise. Needs height, width >= 4 and n_features >= 2.
Region synth_region(std::uint64_t seed, int height, int width, int n_features);

/// Tunables shared by all methods of one experiment.
struct MethodParams {
  Neighbourhood nb = Neighbourhood::rook;
  MrpSettings mrp;
  std::vector<double> gamma_candidates = default_gamma_candidates();
  /// Share of the training region hidden to tune or fit against.
  double p_train = 0.2;
  EvolutionOptions es;
  double weight_ridge = 1e-8;
  double idw_power = 2.0;
  int kriging_neighbours = 16;
  bool kriging_unbiased = true;
  std::vector<VariogramKind> variogram_kinds{VariogramKind::linear, VariogramKind::exponential,
                                             VariogramKind::gaussian};
  double variogram_bin_width = 1.0;
  /// 0 selects half the lattice diagonal.
  double variogram_max_lag = 0.0;
  double ridge_lambda = 1e-8;
  PreprocessOptions preprocess{false, true, true};
};

struct MethodOutput {
  Grid prediction;
  int iterations = 0;  // MRP sweeps; 0 for other methods
};

/// Runs one method on a test mask. `train` is the split the method tunes or
/// fits on; its truth is observed at its hidden cells. O-MRP ignores it and
/// optimises against the test mask itself. Cubes must be preprocessed.
MethodOutput run_method(Method m, const MaskedGrid& test, const FeatureCube& test_cube,
                        const MaskedGrid& train, const FeatureCube& train_cube,
                        const MethodParams& params, std::uint64_t seed);

enum class Condition { same_region, transfer };

std::string_view to_string(Condition c);
Condition parse_condition(std::string_view text);

struct SynthSpec {
  std::uint64_t seed = 1;
  int height = 16;
  int width = 16;
  int n_features = 4;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

/// Either a synthetic region or a grid CSV with its feature cube CSV.
struct RegionRef {
  std::optional<SynthSpec> synth;
  std::filesystem::path grid;
  std::filesystem::path features;
  bool dense = false;

  friend bool operator==(const RegionRef&, const RegionRef&) = default;
};

Region load_region(const RegionRef& ref);

struct ExperimentConfig {
  std::vector<Method> methods;
  std::vector<double> p_values{0.1, 0.3, 0.5, 0.7, 0.9};
  int n_runs = 30;
  Condition condition = Condition::same_region;
  std::optional<RegionRef> train_region;
  RegionRef test_region;
  std::uint64_t seed = 0;
  MethodParams params;

  /// Throws InvalidArgument on a broken invariant.
  void validate() const;
};

/// Parses the JSON form. Relative region paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunRecord {
  Method method = Method::sd_mrp;
  double p = 0.0;
  int run_index = 0;
  std::uint64_t seed = 0;
  double mae = 0.0;
  double wall_time_ms = 0.0;
  int iterations = 0;
};

struct FailureRecord {
  Method method = Method::sd_mrp;
  double p = 0.0;
  int run_index = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<Method> methods;  // config order
  std::vector<double> p_values;
  std::vector<RunRecord> records;  // sorted by (method order, p, run)
  std::vector<FailureRecord> failures;
};

/// Seed of one (method, p, run) cell of the experiment. Injective in the
/// triple for p_index < 2^16 and run_index < 2^32.
std::uint64_t run_seed(std::uint64_t base, Method m, std::size_t p_index, int run_index);

/// Seed of the hidden-cell draw for (p, run). Shared by every method so that
/// per-run errors are paired across methods.
std::uint64_t hide_seed(std::uint64_t base, std::size_t p_index, int run_index);

/// Runs every (method, p, run). Per-run failures are collected, not thrown.
/// `threads` == 0 reads GRIDFILL_THREADS, falling back to the hardware count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// Per-p outperformance ranking over the methods with a complete set of runs.
struct PRanking {
  double p = 0.0;
  std::vector<std::string> methods;
  SignificanceReport report;
};

std::vector<PRanking> rank_by_p(const ExperimentResult& result, double alpha);

/// Writes runs.csv, timings.csv, mae_by_p.csv, ranking.csv, pairwise.csv and
/// failures.csv. Everything but timings.csv is a pure function of the runs.
void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir,
                 double alpha = 0.05);

/// Reads a runs.csv written by emit_report.
ExperimentResult read_runs_csv(const std::filesystem::path& path);

}  // namespace gridfill
