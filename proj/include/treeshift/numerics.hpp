#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>

namespace treeshift {

// Kahan compensated accumulator. Every norm / pairing / report sum in the
// library goes through one of these so results are stable against term
// ordering noise well below the documented tolerances.
class KahanSum {
public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class KahanComplexSum {
public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
  KahanSum re_, im_;
};

// Integer-exponent power by repeated squaring; deterministic across
// platforms, exact whenever every intermediate product is representable.
inline double ipow(double base, std::uint64_t n) {
  double r = 1.0;
  double b = base;
  while (n > 0) {
    if (n & 1u) r *= b;
    b *= b;
    n >>= 1u;
  }
  return r;
}

// Round-trip decimal formatting used by all serializers.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Dual exponent q = p / (p - 1); p = 1 maps to infinity and is rejected by
// callers that need a finite q.
inline double conjugate_exponent(double p) {
  return p / (p - 1.0);
}

// Small deterministic PRNG front-end: uniform double in [-1, 1) from a
// mt19937_64-style 64-bit word. Keeping the mapping hand-rolled (rather than
// std::uniform_real_distribution) pins byte-identical streams everywhere.
inline double unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace treeshift
