#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "rdist/error.hpp"

namespace rdist {

/// Palette for the randomized construction: colours live in [q, 2Q + 2q].
struct PaletteParams {
  std::int64_t delta_max = 0;
  int r = 0;
  std::int64_t delta_pow = 0;  // Δ^{r-1}
  std::int64_t Q = 0;
  std::int64_t q = 0;
  std::int64_t k_total = 0;  // 2Q + 2q

  double ln_delta() const { return std::log(static_cast<double>(delta_max)); }
};

inline constexpr std::int64_t kPaletteLimit = std::int64_t{1} << 62;

/// base^exp in exact arithmetic; CapacityError past 2^62.
inline std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > kPaletteLimit / base) throw CapacityError("Δ^{r-1} exceeds 62-bit range");
    out *= base;
  }
  return out;
}

/// Least multiple of 3 that is >= x.
inline std::int64_t ceil_to_multiple_of_3(long double x) {
  auto c = static_cast<std::int64_t>(std::ceil(x));
  const auto rem = ((c % 3) + 3) % 3;
  return rem == 0 ? c : c + (3 - rem);
}

/// Q: least multiple of 3 with Q >= 2Δ^{r-1} + Δ^{r-1}/lnΔ;
/// q: least multiple of 3 with q >= Δ^{r-1}/lnΔ.
inline PaletteParams palette_params(std::int64_t delta_max, int r) {
  if (delta_max < 2) throw ArgumentError("palette_params: Δ must be >= 2");
  if (r < 2) throw ArgumentError("palette_params: r must be >= 2");
  PaletteParams p;
  p.delta_max = delta_max;
  p.r = r;
  p.delta_pow = checked_pow(delta_max, r - 1);
  const long double d = static_cast<long double>(p.delta_pow);
  const long double ratio = d / std::log(static_cast<long double>(delta_max));
  p.q = ceil_to_multiple_of_3(ratio);
  p.Q = ceil_to_multiple_of_3(2.0L * d + ratio);
  if (p.Q > kPaletteLimit / 4) throw CapacityError("palette exceeds 62-bit range");
  p.k_total = 2 * p.Q + 2 * p.q;
  return p;
}

}  // namespace rdist
