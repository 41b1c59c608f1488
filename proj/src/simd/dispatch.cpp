#include <cstdlib>
#include <string>

#include "gridfill/error.hpp"
#include "gridfill/simd/kernels.hpp"

namespace gridfill::simd {

namespace {

constexpr KernelTable kScalar{Backend::scalar, &scalar::sweep, &scalar::idw_sums};
#if defined(GRIDFILL_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, &avx2::sweep, &avx2::idw_sums};
#endif
#if defined(GRIDFILL_HAVE_NEON)
constexpr KernelTable kNeon{Backend::neon, &neon::sweep, &neon::idw_sums};
#endif

Backend resolve_active() {
  if (const char* env = std::getenv("GRIDFILL_SIMD")) {
    const auto requested = parse_backend(env);
    if (requested && backend_available(*requested)) return *requested;
  }
  return best_backend();
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view text) {
  if (text == "scalar") return Backend::scalar;
  if (text == "avx2") return Backend::avx2;
  if (text == "neon") return Backend::neon;
  return std::nullopt;
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(GRIDFILL_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(GRIDFILL_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Backend best_backend() {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend active_backend() {
  static const Backend active = resolve_active();
  return active;
}

const KernelTable& kernels(Backend b) {
  if (!backend_available(b)) {
    throw InvalidArgument("SIMD backend '" + std::string(to_string(b)) + "' is not available");
  }
  switch (b) {
#if defined(GRIDFILL_HAVE_AVX2)
    case Backend::avx2: return kAvx2;
#endif
#if defined(GRIDFILL_HAVE_NEON)
    case Backend::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& kernels() {
  static const KernelTable& table = kernels(active_backend());
  return table;
}

}  // namespace gridfill::simd
