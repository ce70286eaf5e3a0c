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

// Measure-theoretic experiments on the limsup sets: Dirichlet
// approximation, solution counting, the Borel-Cantelli type lower bound,
// quasi-independence constants, growth of the truncated unions and the
// ubiquity coverage defect.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diophlab/approximation.hpp"
#include "diophlab/directed.hpp"
#include "diophlab/limsup_sets.hpp"
#include "diophlab/numth.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rational.hpp"
#include "diophlab/torus_set.hpp"

namespace diophlab {

// ---------------------------------------------------------------------------
// Dirichlet

struct DirichletApproximation {
  BigInt p;
  BigInt q;
  Rational error;  ///< |alpha - p/q|
  Rational bound;  ///< 1/(q (N+1))
  bool satisfied() const { return error <= bound; }
};

/// p/q with 1 <= q <= N and |alpha - p/q| <= 1/(q(N+1)): the last
/// continued-fraction convergent of alpha whose denominator is at most N.
inline DirichletApproximation dirichlet_approx(const Rational& alpha, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("dirichlet_approx: N must be >= 1");
  if (alpha.sign() < 0 || alpha > Rational(1)) throw std::invalid_argument("dirichlet_approx: alpha must lie in [0, 1]");
  const BigInt limit(static_cast<unsigned long>(n));
  BigInt num = alpha.numerator(), den = alpha.denominator();
  // Convergents h_k/k_k with h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1.
  BigInt h_prev = 0, k_prev = 1, h = 1, k = 0;
  BigInt best_p = 0, best_q = 1;
  while (den != 0) {
    BigInt a, rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    BigInt h_next = a * h + h_prev;
    BigInt k_next = a * k + k_prev;
    if (k_next > limit) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best_p = h;
    best_q = k;
    num = den;
    den = rem;
  }
  DirichletApproximation out;
  out.p = best_p;
  out.q = best_q;
  out.error = abs(alpha - Rational(best_p, best_q));
  out.bound = Rational(BigInt(1), best_q * BigInt(static_cast<unsigned long>(n + 1)));
  return out;
}

// ---------------------------------------------------------------------------
// Solution counting

struct SolutionCount {
  std::uint64_t count = 0;      ///< q <= N with ||q alpha|| < psi(q), certified
  std::uint64_t undecided = 0;  ///< q where ||q alpha|| falls inside the psi(q) enclosure
  Bounds asymptote;             ///< 2 sum_{q <= N} psi(q)
};

namespace detail {
// Chunk size for counting loops; independent of the worker count.
inline constexpr std::size_t kCountChunk = 1 << 15;
// Largest N for which a rational-valued asymptote is summed exactly.
inline constexpr std::uint64_t kExactSumLimit = 2000;
}  // namespace detail

/// #{q <= N : ||q alpha|| < psi(q)} with exact integer arithmetic, and the
/// asymptotic count 2 sum psi(q). Ties ||q alpha|| = psi(q) do not count.
inline SolutionCount count_solutions(const Rational& alpha, const ApproximationFunction& psi, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("count_solutions: N must be >= 1");
  const BigInt a = alpha.frac().numerator();
  const BigInt b = alpha.denominator();

  struct Partial {
    std::uint64_t count = 0;
    std::uint64_t undecided = 0;
  };
  const auto chunks = fixed_chunks(1, n + 1, detail::kCountChunk);
  const auto partials = parallel_map<Partial>(chunks.size(), [&](std::size_t c) {
    Partial out;
    BigInt residue, dist, lhs, rhs;
    for (std::size_t q = chunks[c].begin; q < chunks[c].end; ++q) {
      // ||q alpha|| = min(r, b - r)/b with r = q a mod b.
      residue = a * static_cast<unsigned long>(q);
      mpz_fdiv_r(residue.get_mpz_t(), residue.get_mpz_t(), b.get_mpz_t());
      dist = b - residue;
      if (residue < dist) dist = residue;
      const Bounds value = psi.bounds(q);
      // dist/b < lower  <=>  dist * den(lower) < num(lower) * b
      lhs = dist * value.lower.raw().get_den();
      rhs = value.lower.raw().get_num() * b;
      if (lhs < rhs) {
        ++out.count;
        continue;
      }
      if (value.exact()) continue;
      lhs = dist * value.upper.raw().get_den();
      rhs = value.upper.raw().get_num() * b;
      if (lhs < rhs) ++out.undecided;
    }
    return out;
  });

  SolutionCount result;
  for (const Partial& p : partials) {
    result.count += p.count;
    result.undecided += p.undecided;
  }

  if (psi.rational_valued() && n <= detail::kExactSumLimit) {
    Rational sum;
    for (std::uint64_t q = 1; q <= n; ++q) sum += psi.bounds(q).lower;
    result.asymptote = Bounds::point(Rational(2) * sum);
  } else {
    auto sums = parallel_map<Bounds>(chunks.size(), [&](std::size_t c) {
      directed::DirectedSum s;
      for (std::size_t q = chunks[c].begin; q < chunks[c].end; ++q) s.add(psi.bounds(q));
      return s.bounds();
    });
    directed::DirectedSum total;
    for (const Bounds& s : sums) total.add(s);
    const Bounds t = total.bounds();
    result.asymptote = {Rational(2) * t.lower, Rational(2) * t.upper};
  }
  return result;
}

// ---------------------------------------------------------------------------
// Borel-Cantelli lower bound and quasi-independence

/// Symmetric matrix of pairwise intersection measures |E_k cap E_l|.
using PairMatrix = std::vector<std::vector<Rational>>;

inline PairMatrix pair_measure_matrix(const std::vector<TorusIntervalSet>& family) {
  const std::size_t n = family.size();
  PairMatrix m(n, std::vector<Rational>(n));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  const auto values = parallel_map<Rational>(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    return i == j ? family[i].measure() : family[i].intersect(family[j]).measure();
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    m[i][j] = values[k];
    m[j][i] = values[k];
  }
  return m;
}

/// (sum_k |E_k|)^2 / sum_{k,l} |E_k cap E_l|, or 0 when every set is null.
inline Rational bc_lower_bound(const std::vector<Rational>& measures, const PairMatrix& pairs) {
  const std::size_t n = measures.size();
  if (pairs.size() != n) throw std::invalid_argument("bc_lower_bound: matrix size does not match the family");
  const Rational zero(0), one(1);
  Rational total, denominator;
  for (std::size_t i = 0; i < n; ++i) {
    if (pairs[i].size() != n) throw std::invalid_argument("bc_lower_bound: matrix is not square");
    if (pairs[i][i] != measures[i]) throw std::invalid_argument("bc_lower_bound: diagonal must equal the measures");
    total += measures[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& x = pairs[i][j];
      if (x < zero || x > one) throw std::invalid_argument("bc_lower_bound: entries must lie in [0, 1]");
      if (x != pairs[j][i]) throw std::invalid_argument("bc_lower_bound: matrix must be symmetric");
      denominator += x;
    }
  }
  if (denominator.is_zero()) return zero;
  return total * total / denominator;
}

inline Rational bc_lower_bound(const std::vector<TorusIntervalSet>& family) {
  std::vector<Rational> measures;
  measures.reserve(family.size());
  for (const auto& e : family) measures.push_back(e.measure());
  return bc_lower_bound(measures, pair_measure_matrix(family));
}

/// max over distinct k, l of |E_k cap E_l| / (|E_k| |E_l|).
inline Rational quasi_independence_constant(const std::vector<Rational>& measures, const PairMatrix& pairs) {
  const std::size_t n = measures.size();
  if (n < 2) throw std::invalid_argument("quasi_independence_constant needs at least two sets");
  for (const Rational& m : measures)
    if (m.sign() <= 0) throw std::invalid_argument("quasi_independence_constant: null member makes the ratio undefined");
  Rational best;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational ratio = pairs[i][j] / (measures[i] * measures[j]);
      if (first || ratio > best) best = ratio;
      first = false;
    }
  }
  return best;
}

inline Rational quasi_independence_constant(const std::vector<TorusIntervalSet>& family) {
  std::vector<Rational> measures;
  for (const auto& e : family) measures.push_back(e.measure());
  for (const Rational& m : measures)
    if (m.sign() <= 0) throw std::invalid_argument("quasi_independence_constant: null member makes the ratio undefined");
  return quasi_independence_constant(measures, pair_measure_matrix(family));
}

/// E_j = {x : the j-th binary digit of x is 0}, j >= 1, as 2^{j-1} arcs of
/// length 2^{-j}.
inline TorusIntervalSet dyadic_digit_set(unsigned j) {
  if (j == 0 || j > 24) throw std::invalid_argument("dyadic_digit_set: j must lie in [1, 24]");
  const BigInt den = pow_big(BigInt(2), j);
  TorusIntervalSet::Builder builder;
  const unsigned long arcs = 1UL << (j - 1);
  builder.reserve(arcs);
  for (unsigned long k = 0; k < arcs; ++k)
    builder.add_piece(Rational(BigInt(2 * k), den), Rational(BigInt(2 * k + 1), den));
  return builder.build();
}

/// Measures and pair matrix of E_1..E_N in closed form: binary digits are
/// independent, so |E_j| = 1/2 and |E_k cap E_l| = 1/4 for k != l.
inline std::pair<std::vector<Rational>, PairMatrix> dyadic_digit_family_measures(std::size_t n) {
  const Rational half_(BigInt(1), BigInt(2)), quarter(BigInt(1), BigInt(4));
  std::vector<Rational> measures(n, half_);
  PairMatrix pairs(n, std::vector<Rational>(n, quarter));
  for (std::size_t i = 0; i < n; ++i) pairs[i][i] = half_;
  return {std::move(measures), std::move(pairs)};
}

// ---------------------------------------------------------------------------
// Counting function nu_n(x) and its mean A_n

struct CountingProfile {
  Rational x;
  std::vector<std::uint64_t> ladder;
  std::vector<std::uint64_t> counts;  ///< nu_n(x) = #{k <= n : x in E_k}
  std::vector<Rational> means;        ///< A_n = sum_{k <= n} |E_k|
};

inline CountingProfile counting_profile(const std::vector<TorusIntervalSet>& family, const Rational& x,
                                        const std::vector<std::uint64_t>& ladder) {
  if (!std::is_sorted(ladder.begin(), ladder.end())) throw std::invalid_argument("counting_profile: ladder must be sorted");
  CountingProfile out{x, ladder, {}, {}};
  std::uint64_t count = 0, k = 0;
  Rational mean;
  for (std::uint64_t n : ladder) {
    if (n > family.size()) throw std::invalid_argument("counting_profile: ladder exceeds the family size");
    for (; k < n; ++k) {
      if (family[k].contains(x)) ++count;
      mean += family[k].measure();
    }
    out.counts.push_back(count);
    out.means.push_back(mean);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated unions of B(q; psi(q)) and convergence tails

struct UnionMeasure {
  std::uint64_t n = 0;
  Rational measure;
  bool exact = true;  ///< false: psi was rounded down, measure is a lower bound
};

/// |union_{q <= N} B(q; psi(q))| at every N of a sorted ladder, built
/// incrementally.
inline std::vector<UnionMeasure> khintchine_union_series(const ApproximationFunction& psi,
                                                         const std::vector<std::uint64_t>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("union series needs a non-empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i)
    if (ladder[i] == 0 || (i > 0 && ladder[i] <= ladder[i - 1]))
      throw std::invalid_argument("union ladder must be strictly increasing and start at N >= 1");
  std::vector<UnionMeasure> out;
  TorusIntervalSet acc;
  bool exact = true;
  std::uint64_t done = 0;
  for (std::uint64_t n : ladder) {
    if (!acc.is_full()) {
      TorusIntervalSet::Builder builder;
      for (std::uint64_t q = done + 1; q <= n; ++q) {
        const Bounds value = psi.bounds(q);
        if (!value.exact()) exact = false;
        if (value.lower.is_zero()) continue;
        const TorusIntervalSet b = build_B_1d(q, value.lower);
        if (b.is_full()) {
          builder.add(Rational(0), Rational(1));
          break;
        }
        for (const Interval& p : b.pieces()) builder.add_piece(p.lo, p.hi);
      }
      acc = acc.unite(builder.build());
    }
    done = n;
    out.push_back({n, acc.measure(), exact});
  }
  return out;
}

inline Rational khintchine_union_measure(const ApproximationFunction& psi, std::uint64_t n) {
  return khintchine_union_series(psi, {n}).front().measure;
}

struct TailBound {
  Bounds integral_bound;  ///< 2 N^{1-v}/(v-1), exact for integer v
  Bounds tail;              ///< enclosure of sum_{q > N} 2 q^{-v}
};

/// Convergence-case tail for psi(q) = q^{-v}, v > 1. The enclosure sums the
/// terms up to 4N exactly (or with directed rounding) and brackets the rest
/// between the integrals from 4N+1 and from 4N.
inline TailBound power_tail_bound(const Rational& v, std::uint64_t n) {
  if (v <= Rational(1)) throw std::invalid_argument("power_tail_bound: v must exceed 1");
  if (n == 0) throw std::invalid_argument("power_tail_bound: N must be >= 1");
  const Rational vm1 = v - Rational(1);
  auto integral_from = [&](std::uint64_t x) {  // 2 x^{1-v}/(v-1) enclosure
    const Bounds p = directed::pow(Rational(x), -vm1);
    return Bounds{Rational(2) * p.lower / vm1, Rational(2) * p.upper / vm1};
  };
  TailBound out;
  out.integral_bound = integral_from(n);
  const std::uint64_t m = 4 * n;
  Bounds partial = Bounds::point(0);
  for (std::uint64_t q = n + 1; q <= m; ++q) partial = partial + directed::pow(Rational(q), -v);
  partial = {Rational(2) * partial.lower, Rational(2) * partial.upper};
  out.tail = {partial.lower + integral_from(m + 1).lower, partial.upper + integral_from(m).upper};
  return out;
}

// ---------------------------------------------------------------------------
// Ubiquity

enum class UbiquityCase { line, plane };

struct UbiquityDefect {
  std::uint64_t n = 0;
  Rational radius;  ///< rho~(N) used, rounded down when irrational
  Rational defect;  ///< |T \ union B~(q; radius)|
  bool exact = true;  ///< false: defect is an upper bound on the true defect
};

/// Measure of the part of T (line, m = 1) or T^2 (plane, m = 2, n = 1) not
/// covered by the sup-norm neighbourhoods B~(q; rho~(N)), 1 <= |q| <= N.
inline UbiquityDefect ubiquity_defect(UbiquityCase dim_case, std::uint64_t n, const ApproximationFunction& rho) {
  if (n == 0) throw std::invalid_argument("ubiquity_defect: N must be >= 1");
  const Bounds r = rho.bounds(n);
  UbiquityDefect out{n, r.lower, Rational(0), r.exact()};
  if (r.lower.is_zero()) {
    out.defect = Rational(1);
    return out;
  }
  if (dim_case == UbiquityCase::line) {
    if (r.lower >= half()) return out;
    // B~(q; delta) = B(q; q delta): arcs of radius delta about every p/q.
    // Multiples p/q = p'/q' with q' < q repeat the same arc, so only reduced
    // fractions are added.
    TorusIntervalSet::Builder builder;
    for (std::uint64_t q = 1; q <= n; ++q) {
      const Neighborhood nb =
          neighborhood_convert(LatticeVector{{static_cast<long>(q)}}, r.lower, NeighborhoodDirection::tilde_to_B);
      const Rational arc_radius = nb.radius / Rational(q);
      for (std::uint64_t p = 0; p < q; ++p) {
        if (std::gcd(p, q) != 1) continue;
        const Rational centre = Rational(BigInt(static_cast<unsigned long>(p)), BigInt(static_cast<unsigned long>(q)));
        builder.add(centre - arc_radius, centre + arc_radius);
      }
    }
    out.defect = Rational(1) - builder.build().measure();
    return out;
  }
  // Plane: one vector from each pair {q, -q} with 1 <= |q| <= N.
  std::vector<RegionExpr> parts;
  const long nn = static_cast<long>(n);
  for (long a = -nn; a <= nn; ++a) {
    for (long b = 0; b <= nn; ++b) {
      if (b == 0 && a <= 0) continue;
      const LatticeVector q{{a, b}};
      const Neighborhood nb = neighborhood_convert(q, r.lower, NeighborhoodDirection::tilde_to_B);
      parts.push_back(RegionExpr::leaf(build_strips_2d(q, nb.radius)));
    }
  }
  out.defect = Rational(1) - area_2d(RegionExpr::unite(std::move(parts)));
  return out;
}

}  // namespace diophlab
