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

// Hausdorff-dimension machinery for W_v = {x : ||q x|| < q^{-v} i.o.}:
// s-volumes of the natural cover, a dyadic-block estimate of the critical
// exponent, a box-counting slope over dyadic shells, and the closed-form
// Jarnik-Besicovitch / ubiquity exponents.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diophlab/directed.hpp"
#include "diophlab/limsup_sets.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rational.hpp"
#include "diophlab/torus_set.hpp"

namespace diophlab {

/// Natural cover of the shells Q0 <= q <= Q1: q+1 intervals of length
/// 2 q^{-v-1} per q.
struct CoverSpec {
  Rational v;
  std::uint64_t q0 = 1;
  std::uint64_t q1 = 1;

  void validate() const {
    if (v.sign() <= 0) throw std::invalid_argument("cover: v must be positive");
    if (q0 < 1 || q1 < q0) throw std::invalid_argument("cover: need 1 <= Q0 <= Q1");
  }
};

namespace detail {
inline constexpr std::uint64_t kExactVolumeTerms = 5000;
inline constexpr std::size_t kVolumeChunk = 4096;
}  // namespace detail

/// s-volume sum_{q=Q0}^{Q1} (q+1) (2 q^{-v-1})^s. Exact when every term is
/// rational and the range is short, otherwise a 96-bit directed enclosure.
inline Bounds s_volume(const CoverSpec& cover, const Rational& s) {
  cover.validate();
  if (s.sign() <= 0) throw std::invalid_argument("s_volume: s must be positive");
  const Rational exponent = -(s * (cover.v + Rational(1)));  // q^{-s(v+1)}
  const Bounds two_s = directed::pow(Rational(2), s, directed::kDimensionPrecision);

  if (s.is_integer() && exponent.is_integer() && cover.q1 - cover.q0 < detail::kExactVolumeTerms) {
    const long e = exponent.numerator().get_si();
    Rational sum;
    for (std::uint64_t q = cover.q0; q <= cover.q1; ++q) sum += Rational(q + 1) * pow(Rational(q), e);
    return Bounds::point(two_s.lower * sum);
  }

  const mpfr_prec_t prec = directed::kDimensionPrecision;
  const auto chunks = fixed_chunks(cover.q0, cover.q1 + 1, detail::kVolumeChunk);
  const auto partials = parallel_map<Bounds>(chunks.size(), [&](std::size_t c) {
    directed::Real e_lo(prec), e_hi(prec), base(prec), term_lo(prec), term_hi(prec);
    e_lo.set(exponent, MPFR_RNDD);
    e_hi.set(exponent, MPFR_RNDU);
    directed::DirectedSum sum(prec);
    directed::Real acc_lo(prec), acc_hi(prec);
    mpfr_set_zero(acc_lo.get(), 1);
    mpfr_set_zero(acc_hi.get(), 1);
    for (std::size_t q = chunks[c].begin; q < chunks[c].end; ++q) {
      // q >= 1, so q^e is non-decreasing in e.
      mpfr_set_ui(base.get(), q, MPFR_RNDN);
      mpfr_pow(term_lo.get(), base.get(), e_lo.get(), MPFR_RNDD);
      mpfr_pow(term_hi.get(), base.get(), e_hi.get(), MPFR_RNDU);
      mpfr_mul_ui(term_lo.get(), term_lo.get(), q + 1, MPFR_RNDD);
      mpfr_mul_ui(term_hi.get(), term_hi.get(), q + 1, MPFR_RNDU);
      mpfr_add(acc_lo.get(), acc_lo.get(), term_lo.get(), MPFR_RNDD);
      mpfr_add(acc_hi.get(), acc_hi.get(), term_hi.get(), MPFR_RNDU);
    }
    return Bounds{acc_lo.to_rational(), acc_hi.to_rational()};
  });
  directed::DirectedSum total(prec);
  for (const Bounds& b : partials) total.add(b);
  const Bounds t = total.bounds();
  return {t.lower * two_s.lower, t.upper * two_s.upper};
}

namespace detail {
inline double log2_of(const Rational& x) {
  // Split into mantissa/exponent to stay clear of double underflow.
  long exp_num = 0, exp_den = 0;
  const double mn = mpz_get_d_2exp(&exp_num, x.raw().get_num_mpz_t());
  const double md = mpz_get_d_2exp(&exp_den, x.raw().get_den_mpz_t());
  return std::log2(mn / md) + static_cast<double>(exp_num - exp_den);
}

inline double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}
}  // namespace detail

struct BlockVolume {
  unsigned j = 0;       ///< block [2^j, 2^{j+1}]
  double log2_volume = 0;
};

struct CriticalExponentEstimate {
  double estimate = 0;
  Rational s_low;   ///< final bisection bracket
  Rational s_high;
  unsigned iterations = 0;
  std::vector<BlockVolume> blocks;  ///< block volumes at the final midpoint
};

/// First dyadic block used by the critical-exponent estimator.
inline constexpr unsigned kFirstBlock = 4;

/// Growth exponent of the block s-volumes: least-squares slope of
/// log2 S_j(s) in j, which approximates 2 - s(v+1).
inline double block_growth_exponent(const Rational& v, std::uint64_t qmax, const Rational& s,
                                    std::vector<BlockVolume>* blocks = nullptr) {
  std::vector<double> xs, ys;
  for (unsigned j = kFirstBlock; (std::uint64_t{2} << j) <= qmax; ++j) {
    const std::uint64_t q = std::uint64_t{1} << j;
    const Bounds vol = s_volume(CoverSpec{v, q, 2 * q}, s);
    xs.push_back(j);
    ys.push_back(detail::log2_of(vol.midpoint()));
    if (blocks) blocks->push_back({j, ys.back()});
  }
  if (xs.size() < 4) throw std::invalid_argument("critical_exponent_estimate: Qmax must span at least 4 dyadic blocks");
  return detail::least_squares_slope(xs, ys);
}

/// s at which the block growth exponent crosses zero, by bisection on
/// [0, 2] down to a bracket of width 2^-10.
inline CriticalExponentEstimate critical_exponent_estimate(const Rational& v, std::uint64_t qmax) {
  if (v < Rational(1)) throw std::invalid_argument("critical_exponent_estimate: v must be at least 1");
  if (qmax < (std::uint64_t{1} << (kFirstBlock + 4)))
    throw std::invalid_argument("critical_exponent_estimate: Qmax must span at least 4 dyadic blocks");
  CriticalExponentEstimate out;
  Rational lo(0), hi(2);
  const Rational width(BigInt(1), BigInt(1024));
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / Rational(2);
    if (block_growth_exponent(v, qmax, mid) > 0)
      lo = mid;
    else
      hi = mid;
    ++out.iterations;
  }
  out.s_low = lo;
  out.s_high = hi;
  const Rational mid = (lo + hi) / Rational(2);
  block_growth_exponent(v, qmax, mid, &out.blocks);
  out.estimate = mid.to_double();
  return out;
}

// ---------------------------------------------------------------------------
// Box counting

namespace detail {
using BoxRange = std::pair<__int128, __int128>;  // boxes [first, last)

inline __int128 to_i128(const BigInt& x) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 126) throw std::overflow_error("box index exceeds 126 bits");
  BigInt a = abs(x);
  const unsigned __int128 lo = mpz_getlimbn(a.get_mpz_t(), 0);
  const unsigned __int128 hi = mpz_size(a.get_mpz_t()) > 1 ? mpz_getlimbn(a.get_mpz_t(), 1) : 0;
  const auto mag = static_cast<__int128>((hi << 64) | lo);
  return sgn(x) < 0 ? -mag : mag;
}

inline std::uint64_t count_merged(std::vector<BoxRange> ranges) {
  std::sort(ranges.begin(), ranges.end());
  std::uint64_t total = 0;
  __int128 cur_lo = 0, cur_hi = 0;
  bool open = false;
  for (const auto& [lo, hi] : ranges) {
    if (lo >= hi) continue;
    if (open && lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
      continue;
    }
    if (open) total += static_cast<std::uint64_t>(cur_hi - cur_lo);
    cur_lo = lo;
    cur_hi = hi;
    open = true;
  }
  if (open) total += static_cast<std::uint64_t>(cur_hi - cur_lo);
  return total;
}

inline void push_wrapped(__int128 lo, __int128 hi, __int128 boxes, std::vector<BoxRange>& out) {
  if (hi - lo >= boxes) {
    out.emplace_back(0, boxes);
  } else if (lo < 0) {
    out.emplace_back(lo + boxes, boxes);
    out.emplace_back(0, hi);
  } else if (hi > boxes) {
    out.emplace_back(lo, boxes);
    out.emplace_back(0, hi - boxes);
  } else {
    out.emplace_back(lo, hi);
  }
}
}  // namespace detail

/// Number of grid boxes [k 2^-bits, (k+1) 2^-bits) meeting the set.
inline std::uint64_t box_count(const TorusIntervalSet& set, unsigned bits) {
  if (bits > 120) throw std::invalid_argument("box_count: at most 120 bits");
  const Rational scale(pow_big(BigInt(2), bits));
  std::vector<detail::BoxRange> ranges;
  for (const Interval& p : set.pieces())
    ranges.emplace_back(detail::to_i128((p.lo * scale).floor()), detail::to_i128((p.hi * scale).ceil()));
  return detail::count_merged(std::move(ranges));
}

/// E_Q = union over Q/2 < q <= Q of B(q; q^{-v}), as an interval set.
inline TorusIntervalSet shell_approximant(long v, std::uint64_t big_q) {
  if (v < 1) throw std::invalid_argument("shell_approximant: v must be a positive integer");
  if (big_q < 2 || big_q % 2 != 0) throw std::invalid_argument("shell_approximant: Q must be even");
  TorusIntervalSet::Builder builder;
  for (std::uint64_t q = big_q / 2 + 1; q <= big_q; ++q) {
    const TorusIntervalSet b = build_B_1d(q, pow(Rational(q), -v));
    for (const Interval& p : b.pieces()) builder.add_piece(p.lo, p.hi);
  }
  return builder.build();
}

struct BoxCountPoint {
  std::uint64_t q = 0;
  unsigned delta_bits = 0;  ///< log2(1/delta)
  std::uint64_t boxes = 0;  ///< N(delta)
};

struct BoxCountEstimate {
  double slope = 0;
  std::vector<BoxCountPoint> points;
};

/// N(delta) for E_Q with delta = Q^{-(v+1)}, via exact integer box ranges
/// per arc: the arc about p/q covers boxes floor((p q^v - 1) M / q^{v+1}) up
/// to ceil((p q^v + 1) M / q^{v+1}) - 1, M = 1/delta.
inline std::uint64_t shell_box_count(long v, std::uint64_t big_q) {
  if (big_q < 2 || (big_q & (big_q - 1)) != 0) throw std::invalid_argument("box counting: Q must be a power of 2");
  unsigned j = 0;
  while ((std::uint64_t{1} << j) < big_q) ++j;
  const unsigned long bits = j * static_cast<unsigned long>(v + 1);
  if (bits > 120) throw std::invalid_argument("box counting: delta finer than 2^-120");
  const __int128 boxes = static_cast<__int128>(1) << bits;
  const std::uint64_t first = big_q / 2 + 1;
  const auto chunks = fixed_chunks(first, big_q + 1, 64);
  auto parts = parallel_map<std::vector<detail::BoxRange>>(chunks.size(), [&](std::size_t c) {
    std::vector<detail::BoxRange> out;
    BigInt qv, qv1, step, x, t, lo, hi;
    const BigInt m = pow_big(BigInt(2), bits);
    for (std::uint64_t q = chunks[c].begin; q < chunks[c].end; ++q) {
      qv = pow_big(BigInt(static_cast<unsigned long>(q)), static_cast<unsigned long>(v));
      qv1 = qv * static_cast<unsigned long>(q);
      step = qv * m;
      x = 0;
      for (std::uint64_t p = 0; p < q; ++p, x += step) {
        t = x - m;
        mpz_fdiv_q(lo.get_mpz_t(), t.get_mpz_t(), qv1.get_mpz_t());
        t = x + m;
        mpz_cdiv_q(hi.get_mpz_t(), t.get_mpz_t(), qv1.get_mpz_t());
        detail::push_wrapped(detail::to_i128(lo), detail::to_i128(hi), boxes, out);
      }
    }
    return out;
  });
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<detail::BoxRange> all;
  all.reserve(total);
  for (auto& p : parts) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<detail::BoxRange>().swap(p);
  }
  return detail::count_merged(std::move(all));
}

/// Least-squares slope of log N(delta) against log(1/delta) over a ladder of
/// powers of two; approximates 2/(v+1).
inline BoxCountEstimate box_counting_estimate(const Rational& v, const std::vector<std::uint64_t>& ladder) {
  if (v <= Rational(1)) throw std::invalid_argument("box_counting_estimate: v must exceed 1");
  if (!v.is_integer()) throw std::invalid_argument("box_counting_estimate: v must be an integer so delta stays dyadic");
  if (ladder.size() < 4) throw std::invalid_argument("box_counting_estimate: ladder needs at least 4 entries");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const std::uint64_t q = ladder[i];
    if (q < 2 || (q & (q - 1)) != 0) throw std::invalid_argument("box_counting_estimate: ladder entries must be powers of 2");
    if (i > 0 && q <= ladder[i - 1]) throw std::invalid_argument("box_counting_estimate: ladder must be increasing");
  }
  const long vi = v.numerator().get_si();
  BoxCountEstimate out;
  std::vector<double> xs, ys;
  for (std::uint64_t q : ladder) {
    unsigned j = 0;
    while ((std::uint64_t{1} << j) < q) ++j;
    const unsigned bits = j * static_cast<unsigned>(vi + 1);
    const std::uint64_t n = shell_box_count(vi, q);
    out.points.push_back({q, bits, n});
    xs.push_back(static_cast<double>(bits));
    ys.push_back(std::log2(static_cast<double>(n)));
  }
  out.slope = detail::least_squares_slope(xs, ys);
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {
inline void check_mnv(int m, int n, const Rational& v) {
  if (m < 1 || n < 1) throw std::invalid_argument("dimension formulae need m, n >= 1");
  if (v.sign() <= 0) throw std::invalid_argument("dimension formulae need v > 0");
}
}  // namespace detail

/// dim W_v = (m-1)n + (m+n)/(v+1) for v > m/n, and mn otherwise.
inline Rational jb_dimension(int m, int n, const Rational& v) {
  detail::check_mnv(m, n, v);
  const Rational mr(m), nr(n);
  if (v > mr / nr) return (mr - Rational(1)) * nr + (mr + nr) / (v + Rational(1));
  return mr * nr;
}

struct GammaExponent {
  Rational gamma;        ///< min{1, (1 + m/n)/(1 + v)}
  Rational lower_bound;  ///< dim R + gamma codim R = (m-1)n + gamma n
};

inline GammaExponent gamma_exponent(int m, int n, const Rational& v) {
  detail::check_mnv(m, n, v);
  const Rational mr(m), nr(n);
  const Rational g = std::min(Rational(1), (Rational(1) + mr / nr) / (Rational(1) + v));
  return {g, (mr - Rational(1)) * nr + g * nr};
}

}  // namespace diophlab
