#include <atomic>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/rng.hpp"

namespace gridfill {

namespace {

constexpr std::uint64_t kHideStream = 0x686964652d736565ULL;
constexpr std::uint64_t kSplitStream = 0x747261696e2d7370ULL;

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("GRIDFILL_THREADS")) {
      try {
        n = static_cast<unsigned>(std::max(1L, std::stol(env)));
      } catch (const std::exception&) {
        throw InvalidArgument(std::string("GRIDFILL_THREADS is not a number: ") + env);
      }
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

struct Task {
  std::size_t method_index;
  std::size_t p_index;
  int run_index;
};

}  // namespace

std::uint64_t run_seed(std::uint64_t base, Method m, std::size_t p_index, int run_index) {
  const std::uint64_t key = (static_cast<std::uint64_t>(m) << 48) | (static_cast<std::uint64_t>(p_index) << 32) |
                            static_cast<std::uint32_t>(run_index);
  return mix64(mix64(base) + key);
}

std::uint64_t hide_seed(std::uint64_t base, std::size_t p_index, int run_index) {
  const std::uint64_t key = (static_cast<std::uint64_t>(p_index) << 32) | static_cast<std::uint32_t>(run_index);
  return mix64(mix64(base ^ kHideStream) + key);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const Region test_region = load_region(cfg.test_region);
  const FeatureCube test_cube = preprocess(test_region.cube, cfg.params.preprocess);
  std::optional<Region> train_region;
  std::optional<FeatureCube> train_cube;
  if (cfg.condition == Condition::transfer) {
    train_region = load_region(*cfg.train_region);
    train_cube = preprocess(train_region->cube, cfg.params.preprocess);
  }

  std::vector<Task> tasks;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
      for (int r = 0; r < cfg.n_runs; ++r) tasks.push_back({m, pi, r});
    }
  }

  std::vector<std::optional<RunRecord>> records(tasks.size());
  std::vector<std::optional<FailureRecord>> failures(tasks.size());

  auto execute = [&](std::size_t t) {
    const Task& task = tasks[t];
    const Method method = cfg.methods[task.method_index];
    const double p = cfg.p_values[task.p_index];
    const std::uint64_t seed = run_seed(cfg.seed, method, task.p_index, task.run_index);
    try {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t hs = hide_seed(cfg.seed, task.p_index, task.run_index);
      const MaskedGrid test = hide_observed(test_region.truth, p, hs);
      const MaskedGrid train = train_region
                                   ? hide_observed(train_region->truth, cfg.params.p_train, mix64(hs ^ kSplitStream))
                                   : hide_observed(test.visible(), cfg.params.p_train, mix64(hs ^ kSplitStream));
      const FeatureCube& tc = train_cube ? *train_cube : test_cube;
      const MethodOutput out = run_method(method, test, test_cube, train, tc, cfg.params, seed);
      if (!out.prediction.fully_observed()) throw Error("prediction left cells missing");
      const double err = mae(out.prediction, test.truth(), test.hidden());
      if (!std::isfinite(err)) throw Error("non-finite error");
      const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
      records[t] = RunRecord{method, p, task.run_index, seed, err, elapsed.count(), out.iterations};
    } catch (const std::exception& e) {
      failures[t] = FailureRecord{method, p, task.run_index, seed, e.what()};
    }
  };

  const unsigned n_workers = worker_count(threads, tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) execute(t);
  };
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }

  ExperimentResult result{cfg.methods, cfg.p_values, {}, {}};
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (records[t]) result.records.push_back(*records[t]);
    if (failures[t]) result.failures.push_back(std::move(*failures[t]));
  }
  return result;
}

}  // namespace gridfill
