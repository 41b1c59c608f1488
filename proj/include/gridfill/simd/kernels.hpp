#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants chosen
// at runtime. The sweep kernel is bit-exact across backends (lanes map to
// cells, per-cell operation order is fixed, no fused multiply-add). The IDW
// reduction splits its sums across lanes and agrees only to rounding.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace gridfill::simd {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b);
std::optional<Backend> parse_backend(std::string_view text);

/// Compiled in and supported by the running CPU.
bool backend_available(Backend b);

/// Widest available backend.
Backend best_backend();

/// best_backend(), unless GRIDFILL_SIMD names another available backend.
Backend active_backend();

/// One synchronous neighbour-aggregation sweep over a zero-padded lattice.
///
/// Values live in a (height+2) x (width+2) row-major buffer whose border is
/// zero. Per-cell arrays (weights, divisor, update) are height x width
/// row-major. For every interior cell with update != 0:
///
///   next = (sum_k weights[k][cell] * prev[cell + offsets[k]]) / divisor[cell]
///
/// with k ascending and the sum starting from +0.0. Cells with update == 0
/// are copied through. Out-of-bounds neighbours must carry weight 0.
struct SweepProblem {
  int height = 0;
  int width = 0;
  std::span<const std::ptrdiff_t> offsets;  // in padded index units
  std::span<const double> weights;          // offsets.size() planes
  std::span<const double> divisor;
  std::span<const double> update;
};

/// Returns max |next - prev| over updated cells (0 if none).
using SweepFn = double (*)(const SweepProblem&, std::span<const double> prev,
                           std::span<double> next);

struct IdwSums {
  double weight = 0.0;
  double weighted_value = 0.0;
};

/// Sums w_j and w_j * v_j with w_j = 1 / d_j^power over sources at
/// (src_h[j], src_w[j]). No source may coincide with the query.
using IdwFn = IdwSums (*)(double query_h, double query_w, std::span<const double> src_h,
                          std::span<const double> src_w, std::span<const double> src_v,
                          double power);

struct KernelTable {
  Backend backend;
  SweepFn sweep;
  IdwFn idw_sums;
};

/// Kernels for the active backend.
const KernelTable& kernels();

/// Kernels for a specific backend; throws InvalidArgument if unavailable.
const KernelTable& kernels(Backend b);

namespace scalar {
double sweep(const SweepProblem& problem, std::span<const double> prev, std::span<double> next);
IdwSums idw_sums(double query_h, double query_w, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power);
}  // namespace scalar

#if defined(GRIDFILL_HAVE_AVX2)
namespace avx2 {
double sweep(const SweepProblem& problem, std::span<const double> prev, std::span<double> next);
IdwSums idw_sums(double query_h, double query_w, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power);
}  // namespace avx2
#endif

#if defined(GRIDFILL_HAVE_NEON)
namespace neon {
double sweep(const SweepProblem& problem, std::span<const double> prev, std::span<double> next);
IdwSums idw_sums(double query_h, double query_w, std::span<const double> src_h,
                 std::span<const double> src_w, std::span<const double> src_v, double power);
}  // namespace neon
#endif

}  // namespace gridfill::simd
