#pragma once

// Nondecreasing unbounded growth functions g: N -> N used for sharpness
// schedules and bound margins.  Values saturate at kGrowthSat so that
// schedule entries whose true canonical value exceeds any representable
// window are carried symbolically as "capped".

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace shiftlab {

constexpr std::uint64_t kGrowthSat = std::uint64_t(1) << 62;

struct GrowthFunction {
  std::string name;
  std::function<std::uint64_t(std::uint64_t)> eval;
  // least n with eval(n) >= target, or kGrowthSat if none representable
  std::function<std::uint64_t(std::uint64_t)> least_n;

  std::uint64_t operator()(std::uint64_t n) const { return eval(n); }

  // least n with eval(n) >= target; generic doubling+bisection fallback.
  std::uint64_t least_n_with(std::uint64_t target) const {
    if (least_n) return least_n(target);
    if (eval(1) >= target) return 1;
    std::uint64_t hi = 1;
    while (hi < kGrowthSat && eval(hi) < target) hi *= 2;
    if (eval(hi) < target) return kGrowthSat;
    std::uint64_t lo = hi / 2;
    while (lo + 1 < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (eval(mid) >= target)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

  static GrowthFunction log2_ceil() {
    return GrowthFunction{
        "log2",
        [](std::uint64_t n) -> std::uint64_t {
          if (n <= 2) return 1;
          return std::uint64_t(std::bit_width(n - 1));  // ceil(log2 n)
        },
        [](std::uint64_t t) -> std::uint64_t {
          if (t <= 1) return 1;
          if (t - 1 >= 62) return kGrowthSat;
          return (std::uint64_t(1) << (t - 1)) + 1;  // least n with ceil(log2 n) = t
        }};
  }

  static GrowthFunction sqrt_ceil() {
    auto isqrt = [](std::uint64_t n) -> std::uint64_t {
      if (n == 0) return 0;
      std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
      while (r > 0 && r * r > n) --r;
      while ((r + 1) * (r + 1) <= n) ++r;
      return r;
    };
    return GrowthFunction{
        "sqrt",
        [isqrt](std::uint64_t n) -> std::uint64_t {
          std::uint64_t r = isqrt(n);
          return r * r == n ? r : r + 1;  // ceil(sqrt n)
        },
        [](std::uint64_t t) -> std::uint64_t {
          if (t <= 1) return 1;
          if (t - 1 > (std::uint64_t(1) << 31)) return kGrowthSat;
          std::uint64_t v = (t - 1) * (t - 1) + 1;
          return v >= kGrowthSat ? kGrowthSat : v;
        }};
  }

  static GrowthFunction linear() {
    return GrowthFunction{"linear", [](std::uint64_t n) { return n; },
                          [](std::uint64_t t) { return t == 0 ? 1 : std::min(t, kGrowthSat); }};
  }

  static GrowthFunction zero() {
    return GrowthFunction{"zero", [](std::uint64_t) -> std::uint64_t { return 0; }, nullptr};
  }

  static GrowthFunction by_name(const std::string& name) {
    if (name == "log2") return log2_ceil();
    if (name == "sqrt") return sqrt_ceil();
    if (name == "linear") return linear();
    if (name == "zero" || name == "none" || name.empty()) return zero();
    throw std::domain_error("unknown growth function: " + name);
  }
};

}  // namespace shiftlab
