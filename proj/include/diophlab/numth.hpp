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

// Number-theoretic kernels: Moebius function, Euler's totient, divisor
// counts, a linear sieve for batch queries, and primitive lattice shells.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diophlab/rational.hpp"

namespace diophlab {

/// Integer vector q in Z^m.
struct LatticeVector {
  std::vector<long> components;

  std::size_t dimension() const { return components.size(); }

  /// |q| = max_i |q_i|.
  long sup_norm() const {
    long r = 0;
    for (long c : components) r = std::max(r, std::labs(c));
    return r;
  }
  /// |q|_1 = sum_i |q_i|.
  long one_norm() const {
    long r = 0;
    for (long c : components) r += std::labs(c);
    return r;
  }
  /// gcd of the components; 0 for the zero vector.
  long content() const {
    long g = 0;
    for (long c : components) g = std::gcd(g, std::labs(c));
    return g;
  }
  bool is_zero() const { return content() == 0; }
  bool is_primitive() const { return content() == 1; }

  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
  friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
};

/// Prime factorisation by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int mobius(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("mobius: argument must be >= 1");
  int sign = 1;
  for (const auto& [p, e] : factorize(d)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline std::uint64_t totient(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("totient: argument must be >= 1");
  std::uint64_t r = k;
  for (const auto& [p, e] : factorize(k)) r = r / p * (p - 1);
  return r;
}

inline std::uint64_t divisor_count(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("divisor_count: argument must be >= 1");
  std::uint64_t r = 1;
  for (const auto& [p, e] : factorize(k)) r *= static_cast<std::uint64_t>(e + 1);
  return r;
}

/// Squarefree divisors d of k paired with mu(d); the only terms that
/// contribute to a Moebius sum over d | k.
inline std::vector<std::pair<std::uint64_t, int>> squarefree_divisors(std::uint64_t k) {
  std::vector<std::pair<std::uint64_t, int>> out{{1, 1}};
  for (const auto& [p, e] : factorize(k)) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(out[i].first * p, -out[i].second);
  }
  return out;
}

/// Linear sieve over [1, limit] holding mu and phi.
class Sieve {
 public:
  explicit Sieve(std::uint32_t limit) : limit_(limit), mu_(limit + 1, 0), phi_(limit + 1, 0) {
    std::vector<bool> composite(limit + 1, false);
    if (limit >= 1) {
      mu_[1] = 1;
      phi_[1] = 1;
    }
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (!composite[i]) {
        primes_.push_back(i);
        mu_[i] = -1;
        phi_[i] = i - 1;
      }
      for (std::uint32_t p : primes_) {
        const std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
        if (ip > limit) break;
        composite[ip] = true;
        if (i % p == 0) {
          mu_[ip] = 0;
          phi_[ip] = phi_[i] * p;
          break;
        }
        mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
        phi_[ip] = phi_[i] * (p - 1);
      }
    }
  }

  std::uint32_t limit() const { return limit_; }
  int mu(std::uint32_t k) const { return mu_.at(k); }
  std::uint32_t phi(std::uint32_t k) const { return phi_.at(k); }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// Phi(n) = sum_{k <= n} phi(k) for n <= limit.
  std::uint64_t phi_sum(std::uint32_t n) const {
    if (n > limit_) throw std::out_of_range("phi_sum beyond sieve limit");
    std::uint64_t s = 0;
    for (std::uint32_t k = 1; k <= n; ++k) s += phi_[k];
    return s;
  }

 private:
  std::uint32_t limit_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::uint32_t> primes_;
};

/// Totient summatory function Phi(N) = sum_{k=1}^N phi(k).
inline std::uint64_t totient_sum(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("totient_sum: N must be >= 1");
  return Sieve(n).phi_sum(n);
}

namespace detail {
inline void check_shell_args(int m, long k) {
  if (m < 2) throw std::invalid_argument("primitive shell needs dimension m >= 2");
  if (k < 1) throw std::invalid_argument("primitive shell needs radius k >= 1");
}

// Number of q in Z^m with |q| = k and q_m >= 1 (primitive or not).
inline BigInt half_shell_size(int m, long k) {
  const BigInt outer = pow_big(BigInt(2 * k + 1), static_cast<unsigned long>(m - 1));
  const BigInt inner = pow_big(BigInt(2 * k - 1), static_cast<unsigned long>(m - 1));
  return outer + BigInt(k - 1) * (outer - inner);
}

inline void walk_shell(int m, long k, std::vector<long>& prefix, bool on_face, long g,
                       std::vector<LatticeVector>& out) {
  const int pos = static_cast<int>(prefix.size());
  if (pos == m - 1) {
    // Last coordinate: q_m in [1, k], forced to k unless an earlier
    // coordinate already sits on the sup-norm sphere.
    for (long c = on_face ? 1 : k; c <= k; ++c) {
      if (std::gcd(g, c) != 1) continue;
      prefix.push_back(c);
      out.push_back(LatticeVector{prefix});
      prefix.pop_back();
    }
    return;
  }
  for (long c = -k; c <= k; ++c) {
    prefix.push_back(c);
    walk_shell(m, k, prefix, on_face || std::labs(c) == k, std::gcd(g, std::labs(c)), out);
    prefix.pop_back();
  }
}
}  // namespace detail

/// Primitive q in Z^m with |q| = k and q_m >= 1, in lexicographic order.
/// q_m >= 1 picks one vector from each pair {q, -q}, so no two returned
/// vectors are linearly dependent.
inline std::vector<LatticeVector> primitive_shell(int m, long k) {
  detail::check_shell_args(m, k);
  std::vector<LatticeVector> out;
  std::vector<long> prefix;
  prefix.reserve(static_cast<std::size_t>(m));
  detail::walk_shell(m, k, prefix, false, 0, out);
  return out;
}

/// |primitive_shell(m, k)| by Moebius inversion over the divisors of k,
/// without materialising the shell.
inline std::uint64_t shell_cardinality(int m, long k) {
  detail::check_shell_args(m, k);
  BigInt total = 0;
  for (const auto& [d, mu] : squarefree_divisors(static_cast<std::uint64_t>(k)))
    total += mu * detail::half_shell_size(m, k / static_cast<long>(d));
  if (!total.fits_ulong_p()) throw std::overflow_error("shell_cardinality overflows 64 bits");
  return total.get_ui();
}

}  // namespace diophlab
