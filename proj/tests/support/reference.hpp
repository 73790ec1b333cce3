// Copyright 2026 The ssum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only reference arithmetic on GMP/MPFR. Nothing here shares code with
// the library's accumulators or its own fixed-point oracle.

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ssum/radix.hpp"
#include "ssum/rounded_sum.hpp"

namespace ssum::testing {

/// x * 2^1074 as an exact integer.
inline mpz_class scaled(double x) {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_set_d(t, x, MPFR_RNDN);
  mpfr_mul_2si(t, t, 1074, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  return z;
}

inline mpz_class scaled_sum(std::span<const double> xs) {
  mpz_class z = 0;
  for (double x : xs) z += scaled(x);
  return z;
}

/// Value of a digit list, scaled by 2^1074.
inline mpz_class digits_value(std::span<const Digit> digits, int width) {
  mpz_class z = 0;
  for (const Digit& d : digits) {
    mpz_class term(static_cast<long>(d.mantissa));
    mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), static_cast<mp_bitcnt_t>(d.index) * width);
    z += term;
  }
  return z;
}

inline mpz_class dense_value(std::span<const std::int64_t> digits, int width) {
  mpz_class z = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(width));
    z += mpz_class(static_cast<long>(digits[i]));
  }
  return z;
}

/// Round-to-nearest-even of z * 2^-1074 with its direction.
inline RoundedSum round_reference(const mpz_class& z) {
  RoundedSum r;
  if (z == 0) return r;
  mpfr_t t;
  mpfr_init2(t, 53);
  const int ternary = mpfr_set_z_2exp(t, z.get_mpz_t(), -1074, MPFR_RNDN);
  r.value = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  const bool inf = std::isinf(r.value);
  if (ternary != 0 || inf) {
    r.exact = false;
    r.direction = (ternary > 0 || (ternary == 0 && r.value > 0)) ? Rounding::RoundedUp
                                                                 : Rounding::RoundedDown;
  }
  r.msd_exponent = static_cast<int>(mpz_sizeinbase(z.get_mpz_t(), 2)) - 1 - 1074;
  return r;
}

inline RoundedSum reference_sum(std::span<const double> xs) {
  return round_reference(scaled_sum(xs));
}

/// Round-to-nearest-even of a rational into binary64, subnormals included.
inline double round_rational(const mpq_class& q) {
  const mpfr_exp_t emin = mpfr_get_emin();
  const mpfr_exp_t emax = mpfr_get_emax();
  mpfr_set_emin(-1073);
  mpfr_set_emax(1024);
  mpfr_t t;
  mpfr_init2(t, 53);
  int ternary = mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
  ternary = mpfr_check_range(t, ternary, MPFR_RNDN);
  mpfr_subnormalize(t, ternary, MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  mpfr_set_emin(emin);
  mpfr_set_emax(emax);
  return d;
}

inline std::uint64_t ulp_distance(double a, double b) {
  auto key = [](double v) {
    const auto u = std::bit_cast<std::int64_t>(v);
    return u < 0 ? std::numeric_limits<std::int64_t>::min() - u : u;
  };
  const std::int64_t ka = key(a);
  const std::int64_t kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka - kb) : static_cast<std::uint64_t>(kb - ka);
}

/// Random finite doubles from several families that stress exact summation.
class DoubleGenerator {
 public:
  explicit DoubleGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Any finite bit pattern, exponent field uniform.
  double any_finite() {
    for (;;) {
      const double d = std::bit_cast<double>(rng_());
      if (std::isfinite(d)) return d;
    }
  }

  /// Exponent uniform in [lo, hi], random mantissa and sign.
  double in_range(int lo, int hi) {
    std::uniform_int_distribution<int> exp(lo, hi);
    const double m = 1.0 + static_cast<double>(rng_() >> 12) * 0x1p-52;
    const double v = std::ldexp(m, exp(rng_));
    return (rng_() & 1) ? -v : v;
  }

  /// A mix: wide, narrow, subnormal, near-overflow, and cancellation pairs.
  std::vector<double> mixed(std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
      switch (rng_() % 6) {
        case 0:
          out.push_back(any_finite() * 0x1p-80);
          break;
        case 1:
          out.push_back(in_range(-30, 30));
          break;
        case 2:
          out.push_back(std::bit_cast<double>(rng_() & 0x800fffffffffffffULL));
          break;
        case 3:
          out.push_back(in_range(900, 1000));
          break;
        case 4: {
          const double v = in_range(-200, 200);
          out.push_back(v);
          if (out.size() < n) out.push_back(-v);
          break;
        }
        default:
          out.push_back(any_finite());
          if (std::abs(out.back()) > 0x1p1000) out.back() *= 0x1p-100;
          break;
      }
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace ssum::testing
