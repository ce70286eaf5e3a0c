// Copyright 2026 The diophlab Authors
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

#pragma once

// Directed-rounded enclosures of transcendental quantities (logarithms,
// non-integer powers, square roots, pi^2). MPFR does the rounding; results
// come back as exact rationals (dyadic) so that downstream comparisons stay
// exact and one-sided.

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <stdexcept>

#include "diophlab/rational.hpp"

namespace diophlab::directed {

/// Working precision for approximation-function values; the resulting
/// enclosures are far narrower than 2^-64 for arguments of moderate size.
inline constexpr mpfr_prec_t kPsiPrecision = 128;
/// Precision used by the dimension estimators and the pi^2 enclosure.
inline constexpr mpfr_prec_t kDimensionPrecision = 96;

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  void set(const Rational& r, mpfr_rnd_t rnd) { mpfr_set_q(v_, r.raw().get_mpq_t(), rnd); }

  Rational to_rational() const {
    if (!mpfr_number_p(v_)) throw std::domain_error("non-finite value in directed computation");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return Rational(q);
  }

 private:
  mpfr_t v_;
};

/// Enclosure of ln(x) for rational x > 0.
inline Bounds log(const Rational& x, mpfr_prec_t prec = kPsiPrecision) {
  if (x.sign() <= 0) throw std::domain_error("log of a non-positive number");
  if (x == Rational(1)) return Bounds::point(0);
  Real lo(prec), hi(prec);
  lo.set(x, MPFR_RNDD);
  hi.set(x, MPFR_RNDU);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of base^exponent for rational base > 0. Integer exponents are
/// evaluated exactly.
inline Bounds pow(const Rational& base, const Rational& exponent, mpfr_prec_t prec = kPsiPrecision) {
  if (base.sign() <= 0) throw std::domain_error("pow with non-positive base");
  if (exponent.is_integer()) {
    const BigInt e = exponent.numerator();
    if (!e.fits_slong_p()) throw std::overflow_error("exponent too large");
    return Bounds::point(diophlab::pow(base, e.get_si()));
  }
  if (base == Rational(1)) return Bounds::point(1);
  // b^e is monotone in each argument separately, so the extremes over the
  // rounded box are attained at its corners.
  std::array<Real, 2> b{Real(prec), Real(prec)};
  std::array<Real, 2> e{Real(prec), Real(prec)};
  b[0].set(base, MPFR_RNDD);
  b[1].set(base, MPFR_RNDU);
  e[0].set(exponent, MPFR_RNDD);
  e[1].set(exponent, MPFR_RNDU);
  Real lo(prec), hi(prec), t(prec);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (auto& bb : b) {
    for (auto& ee : e) {
      mpfr_pow(t.get(), bb.get(), ee.get(), MPFR_RNDD);
      mpfr_min(lo.get(), lo.get(), t.get(), MPFR_RNDD);
      mpfr_pow(t.get(), bb.get(), ee.get(), MPFR_RNDU);
      mpfr_max(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    }
  }
  return {lo.to_rational(), hi.to_rational()};
}

/// Enclosure of 1/sqrt(q) for a positive integer q.
inline Bounds inverse_sqrt(unsigned long q, mpfr_prec_t prec = kPsiPrecision) {
  if (q == 0) throw std::domain_error("inverse_sqrt of zero");
  Real lo(prec), hi(prec);
  mpfr_set_ui(lo.get(), q, MPFR_RNDN);  // exact for q < 2^prec
  mpfr_set_ui(hi.get(), q, MPFR_RNDN);
  mpfr_rec_sqrt(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_rec_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

inline Bounds pi_squared(mpfr_prec_t prec = kDimensionPrecision) {
  Real lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  mpfr_sqr(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqr(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

/// Product of two enclosures of non-negative quantities.
inline Bounds multiply_nonnegative(const Bounds& a, const Bounds& b) {
  if (a.lower.sign() < 0 || b.lower.sign() < 0) throw std::domain_error("multiply_nonnegative: negative bound");
  return {a.lower * b.lower, a.upper * b.upper};
}

/// Running sum of enclosures with outward rounding, for long series whose
/// exact rational sum would carry enormous denominators.
class DirectedSum {
 public:
  explicit DirectedSum(mpfr_prec_t prec = kPsiPrecision) : lo_(prec), hi_(prec) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
  }

  void add(const Bounds& term) {
    mpfr_add_q(lo_.get(), lo_.get(), term.lower.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(hi_.get(), hi_.get(), term.upper.raw().get_mpq_t(), MPFR_RNDU);
  }

  void add(const DirectedSum& other) {
    mpfr_add(lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
    mpfr_add(hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  }

  Bounds bounds() const { return {lo_.to_rational(), hi_.to_rational()}; }

 private:
  Real lo_;
  Real hi_;
};

}  // namespace diophlab::directed
