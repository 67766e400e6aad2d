#pragma once

// Circle-rotation arithmetic for Sturmian coding.
//
// Orbit points frac(x0 + n*beta) are computed exactly in fixed point with
// 96 fractional bits (native unsigned __int128 at query time).  The only
// numerical hazard is a query whose orbit point lands within the guard
// band of an interval endpoint, where the truncation of beta could flip
// the coded symbol; such queries escalate to 192-bit arithmetic, and if
// still ambiguous the coder refuses rather than guessing.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shiftlab/core.hpp"

namespace shiftlab {

namespace mp = boost::multiprecision;

// Exact definition of an irrational in (0,1): floor(value * 2^bits) at any
// requested precision, deterministically.
struct RealSpec {
  std::string description;
  std::function<mp::cpp_int(int bits)> bits_fn;

  mp::cpp_int bits(int b) const { return bits_fn(b); }

  // (sqrt(5)-1)/2 = 0.6180339887...
  static RealSpec golden() {
    return RealSpec{"(sqrt(5)-1)/2", [](int b) {
                      mp::cpp_int shifted = mp::cpp_int(5) << (2 * b);
                      mp::cpp_int root = mp::sqrt(shifted);  // floor(2^b sqrt5)
                      return mp::cpp_int((root - (mp::cpp_int(1) << b)) / 2);
                    }};
  }

  // 1/sqrt(k) for a non-square integer k >= 2.
  static RealSpec inv_sqrt(int k) {
    return RealSpec{"1/sqrt(" + std::to_string(k) + ")", [k](int b) {
                      mp::cpp_int shifted = (mp::cpp_int(1) << (2 * b)) / k;
                      return mp::cpp_int(mp::sqrt(shifted));
                    }};
  }

  // Decimal string "0.ddddd..."; the supplied digits are taken as exact.
  static RealSpec decimal(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos || text.substr(0, dot) != "0")
      throw std::domain_error("decimal spec must look like 0.ddd...");
    std::string digits = text.substr(dot + 1);
    if (digits.empty()) throw std::domain_error("decimal spec needs digits");
    return RealSpec{text, [digits](int b) {
                      mp::cpp_int num(digits);
                      mp::cpp_int den = 1;
                      for (std::size_t i = 0; i < digits.size(); ++i) den *= 10;
                      return (num << b) / den;
                    }};
  }

  // this + other (values must stay below 1 for coder use).
  RealSpec plus(const RealSpec& other) const {
    auto self = *this;
    return RealSpec{description + "+" + other.description,
                    [self, other](int b) { return self.bits(b) + other.bits(b); }};
  }

  // this / k.
  RealSpec over(int k) const {
    auto self = *this;
    return RealSpec{"(" + description + ")/" + std::to_string(k),
                    [self, k](int b) { return self.bits(b + 16) / k >> 16; }};
  }

  // this * p/q (p < q), staying in (0,1).
  RealSpec times(int p, int q) const {
    auto self = *this;
    return RealSpec{"(" + description + ")*" + std::to_string(p) + "/" + std::to_string(q),
                    [self, p, q](int b) { return self.bits(b + 16) * p / q >> 16; }};
  }

  // The rational r = p/q as a spec (used for interval endpoints).
  static RealSpec rational(std::int64_t p, std::int64_t q) {
    return RealSpec{std::to_string(p) + "/" + std::to_string(q),
                    [p, q](int b) { return (mp::cpp_int(p) << b) / q; }};
  }
};

namespace detail {

using u128 = unsigned __int128;

constexpr int kFracBits = 96;
inline u128 frac_mask() { return (u128(1) << kFracBits) - 1; }

// n * b96 mod 2^96 for n >= 0.
inline u128 mul_frac(std::uint64_t n, u128 b96) {
  std::uint64_t lo = static_cast<std::uint64_t>(b96);
  std::uint64_t hi = static_cast<std::uint64_t>(b96 >> 64);  // < 2^32
  u128 r = u128(n) * lo + ((u128(n) * hi) << 64);
  return r & frac_mask();
}

inline u128 from_cpp_int(const mp::cpp_int& v) {
  mp::cpp_int m = v & ((mp::cpp_int(1) << kFracBits) - 1);
  u128 out = 0;
  for (int limb = 0; limb < 2; ++limb) {
    mp::cpp_int part = (m >> (64 * limb)) & 0xFFFFFFFFFFFFFFFFull;
    out |= u128(part.convert_to<std::uint64_t>()) << (64 * limb);
  }
  return out;
}

}  // namespace detail

class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Coder for s_n = [ frac(x0 + n*beta) in [0, beta) ].
class RotationCoder {
 public:
  RotationCoder(RealSpec beta, RealSpec x0)
      : beta_spec_(std::move(beta)), x0_spec_(std::move(x0)) {
    beta96_ = detail::from_cpp_int(beta_spec_.bits(detail::kFracBits));
    x096_ = detail::from_cpp_int(x0_spec_.bits(detail::kFracBits));
    if (beta96_ == 0) throw std::domain_error("beta must lie in (0,1)");
    if (x096_ == 0) throw std::domain_error("x0 must lie in (0,1)");
    check_irrational();
  }

  const RealSpec& beta_spec() const { return beta_spec_; }
  const RealSpec& x0_spec() const { return x0_spec_; }

  // frac(x0 + n*beta) at 96 bits.
  detail::u128 orbit_point(std::int64_t n) const {
    using namespace detail;
    u128 v = x096_;
    if (n >= 0) {
      v += mul_frac(static_cast<std::uint64_t>(n), beta96_);
    } else {
      u128 d = mul_frac(static_cast<std::uint64_t>(-n), beta96_);
      v += (frac_mask() + 1 - d);
    }
    return v & frac_mask();
  }

  // 1 iff the orbit point lies in [0, beta).
  int code(std::int64_t n) const {
    using namespace detail;
    u128 v = orbit_point(n);
    const u128 guard = u128(1) << (kFracBits - 64);  // 2^-64
    bool near_zero = v < guard || (frac_mask() + 1 - v) < guard;
    bool near_beta = (v > beta96_ ? v - beta96_ : beta96_ - v) < guard;
    if (near_zero || near_beta) return code_escalated(n);
    return v < beta96_ ? 1 : 0;
  }

  // Codes an arbitrary start point given at 96 bits (used for language
  // enumeration from interval midpoints).
  int code_from(detail::u128 y96, std::int64_t n) const {
    using namespace detail;
    u128 v = y96;
    if (n >= 0)
      v += mul_frac(static_cast<std::uint64_t>(n), beta96_);
    else
      v += (frac_mask() + 1 - mul_frac(static_cast<std::uint64_t>(-n), beta96_));
    v &= frac_mask();
    return v < beta96_ ? 1 : 0;
  }

  detail::u128 beta96() const { return beta96_; }

  // The r+1 distinct r-words of the Sturmian language, enumerated from the
  // circle partition (no window scanning involved).  Emitted with symbols
  // 0/1; callers relabel.
  std::vector<Word> language(int r) const {
    using namespace detail;
    if (r < 1) throw std::domain_error("language: r must be >= 1");
    // Breakpoints frac(-k*beta) for k = -1, 0, ..., r-1.
    std::vector<u128> pts;
    pts.reserve(static_cast<std::size_t>(r) + 1);
    for (std::int64_t k = -1; k < r; ++k) {
      u128 v = (k >= 0) ? (frac_mask() + 1 - mul_frac(static_cast<std::uint64_t>(k), beta96_)) &
                              frac_mask()
                        : beta96_;
      pts.push_back(v);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Word> words;
    for (std::size_t t = 0; t < pts.size(); ++t) {
      u128 lo = pts[t];
      u128 hi = (t + 1 < pts.size()) ? pts[t + 1] : (frac_mask() + 1);
      u128 mid = lo + (hi - lo) / 2;
      Word w;
      w.reserve(static_cast<std::size_t>(r));
      for (int kk = 0; kk < r; ++kk)
        w.push_back(static_cast<char>(code_from(mid, kk)));
      words.push_back(std::move(w));
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
  }

 private:
  int code_escalated(std::int64_t n) const {
    const int bits = 192;
    mp::cpp_int one = mp::cpp_int(1) << bits;
    mp::cpp_int beta = beta_spec_.bits(bits);
    mp::cpp_int x0 = x0_spec_.bits(bits);
    mp::cpp_int v = (x0 + beta * n) % one;
    if (v < 0) v += one;
    mp::cpp_int guard = mp::cpp_int(1) << (bits - 128);  // 2^-128
    bool near_zero = v < guard || one - v < guard;
    mp::cpp_int d = v > beta ? v - beta : beta - v;
    if (near_zero || d < guard)
      throw PrecisionError("rotation coding ambiguous within precision guard at n=" +
                           std::to_string(n) + "; supply beta/x0 to higher precision");
    return v < beta ? 1 : 0;
  }

  void check_irrational() const {
    // Continued-fraction walk of beta96/2^96: terminating within the first
    // terms, or an enormous partial quotient there, means beta is rational
    // at working resolution (supply more digits).
    mp::cpp_int a = beta_spec_.bits(detail::kFracBits);
    mp::cpp_int b = mp::cpp_int(1) << detail::kFracBits;
    for (int t = 0; t < 48; ++t) {
      if (a == 0)
        throw std::domain_error("beta is rational within the working precision guard: " +
                                beta_spec_.description);
      mp::cpp_int q = b / a;
      if (q > (mp::cpp_int(1) << 48))
        throw std::domain_error(
            "beta is rational within the working precision guard: " + beta_spec_.description);
      mp::cpp_int r = b % a;
      b = a;
      a = r;
    }
  }

  RealSpec beta_spec_;
  RealSpec x0_spec_;
  detail::u128 beta96_;
  detail::u128 x096_;
};

}  // namespace shiftlab
