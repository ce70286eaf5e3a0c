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

// Approximation functions psi : N -> (0, inf), evaluated either exactly or as
// directed-rounded rational enclosures when a logarithm or an irrational
// power is involved.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "diophlab/directed.hpp"
#include "diophlab/rational.hpp"

namespace diophlab {

enum class Rounding { exact, lower, upper };

class ApproximationFunction {
 public:
  /// q -> q^{-v}
  struct Power {
    Rational v;
  };
  /// q -> c/q
  struct ScaledReciprocal {
    Rational c;
  };
  /// q -> 1/(q (log q)^{1+eps}) for q >= 2, and 1/2 at q = 1.
  struct LogRefined {
    Rational epsilon;
  };
  /// N -> 2 N^{-1-m/n} log N
  struct Ubiquity {
    int m;
    int n;
  };
  /// Explicit (q, value) pairs sorted by q; values may be enclosures.
  struct Table {
    std::shared_ptr<const std::vector<std::pair<std::uint64_t, Bounds>>> entries;
  };
  using Kind = std::variant<Power, ScaledReciprocal, LogRefined, Ubiquity, Table>;

  static ApproximationFunction power(const Rational& v) {
    if (v.sign() <= 0) throw std::invalid_argument("power: exponent v must be positive");
    return ApproximationFunction(Power{v});
  }
  static ApproximationFunction scaled_reciprocal(const Rational& c) {
    if (c.sign() <= 0) throw std::invalid_argument("scaled_reciprocal: constant must be positive");
    return ApproximationFunction(ScaledReciprocal{c});
  }
  static ApproximationFunction log_refined(const Rational& epsilon) {
    if (epsilon.sign() < 0) throw std::invalid_argument("log_refined: epsilon must be >= 0");
    return ApproximationFunction(LogRefined{epsilon});
  }
  static ApproximationFunction ubiquity(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("ubiquity: m and n must be >= 1");
    return ApproximationFunction(Ubiquity{m, n});
  }
  static ApproximationFunction table(std::vector<std::pair<std::uint64_t, Bounds>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& [q, b] = entries[i];
      if (q == 0) throw std::invalid_argument("table: q must be >= 1");
      if (i > 0 && entries[i - 1].first == q) throw std::invalid_argument("table: duplicate q");
      if (b.lower.sign() <= 0 || b.upper < b.lower) throw std::invalid_argument("table: values must be positive enclosures");
    }
    return ApproximationFunction(Table{std::make_shared<const std::vector<std::pair<std::uint64_t, Bounds>>>(std::move(entries))});
  }
  static ApproximationFunction table(const std::vector<std::pair<std::uint64_t, Rational>>& values) {
    std::vector<std::pair<std::uint64_t, Bounds>> e;
    e.reserve(values.size());
    for (const auto& [q, v] : values) e.emplace_back(q, Bounds::point(v));
    return table(std::move(e));
  }
  /// Table of c/sqrt(q) enclosures for q = 1..limit.
  static ApproximationFunction inverse_sqrt_table(const Rational& c, std::uint64_t limit) {
    if (c.sign() <= 0) throw std::invalid_argument("inverse_sqrt_table: constant must be positive");
    std::vector<std::pair<std::uint64_t, Bounds>> e;
    e.reserve(limit);
    for (std::uint64_t q = 1; q <= limit; ++q) {
      const Bounds r = directed::inverse_sqrt(q);
      e.emplace_back(q, Bounds{c * r.lower, c * r.upper});
    }
    return table(std::move(e));
  }
  /// Table holding the constant c for q = 1..limit.
  static ApproximationFunction constant_table(const Rational& c, std::uint64_t limit) {
    std::vector<std::pair<std::uint64_t, Bounds>> e;
    e.reserve(limit);
    for (std::uint64_t q = 1; q <= limit; ++q) e.emplace_back(q, Bounds::point(c));
    return table(std::move(e));
  }

  /// Parses "power:v", "recip:c", "logref:eps", "ubiq:m,n", "table:q=v,q=v,...".
  /// With table_limit > 0 also accepts "invsqrt:c" (c/sqrt(q)) and "const:c",
  /// both tabulated for q = 1..table_limit.
  static ApproximationFunction parse(std::string_view spec, std::uint64_t table_limit = 0);

  const Kind& kind() const { return kind_; }

  /// Whether the kind's values are rational by construction.
  bool rational_valued() const {
    return std::visit(
        [](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) return k.v.is_integer();
          if constexpr (std::is_same_v<K, ScaledReciprocal>) return true;
          if constexpr (std::is_same_v<K, LogRefined> || std::is_same_v<K, Ubiquity>) return false;
          if constexpr (std::is_same_v<K, Table>)
            return std::all_of(k.entries->begin(), k.entries->end(), [](const auto& e) { return e.second.exact(); });
        },
        kind_);
  }

  /// Enclosure of psi(q); exact kinds return a point.
  Bounds bounds(std::uint64_t q) const {
    if (q == 0) throw std::invalid_argument("approximation function evaluated at q = 0");
    return std::visit([q](const auto& k) { return evaluate(k, q); }, kind_);
  }

  /// Canonical spec string.
  std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Power>) return "power:" + k.v.to_string();
          if constexpr (std::is_same_v<K, ScaledReciprocal>) return "recip:" + k.c.to_string();
          if constexpr (std::is_same_v<K, LogRefined>) return "logref:" + k.epsilon.to_string();
          if constexpr (std::is_same_v<K, Ubiquity>) return "ubiq:" + std::to_string(k.m) + "," + std::to_string(k.n);
          if constexpr (std::is_same_v<K, Table>) return "table[" + std::to_string(k.entries->size()) + "]";
        },
        kind_);
  }

 private:
  explicit ApproximationFunction(Kind k) : kind_(std::move(k)) {}

  static Bounds evaluate(const Power& k, std::uint64_t q) {
    const Bounds b = directed::pow(Rational(q), -k.v);
    return b;
  }
  static Bounds evaluate(const ScaledReciprocal& k, std::uint64_t q) { return Bounds::point(k.c / Rational(q)); }
  static Bounds evaluate(const LogRefined& k, std::uint64_t q) {
    if (q == 1) return Bounds::point(Rational(BigInt(1), BigInt(2)));
    const Bounds log_q = directed::log(Rational(q));
    const Rational exponent = Rational(1) + k.epsilon;
    // log q > 0 and the exponent is positive, so the power is increasing in log q.
    const Rational lo = directed::pow(log_q.lower, exponent).lower;
    const Rational hi = directed::pow(log_q.upper, exponent).upper;
    return {Rational(1) / (Rational(q) * hi), Rational(1) / (Rational(q) * lo)};
  }
  static Bounds evaluate(const Ubiquity& k, std::uint64_t n) {
    if (n == 1) return Bounds::point(0);
    const Bounds p = directed::pow(Rational(n), Rational(-1) - Rational(BigInt(k.m), BigInt(k.n)));
    const Bounds l = directed::log(Rational(n));
    return {Rational(2) * p.lower * l.lower, Rational(2) * p.upper * l.upper};
  }
  static Bounds evaluate(const Table& k, std::uint64_t q) {
    const auto& e = *k.entries;
    if (q <= e.size() && e[q - 1].first == q) return e[q - 1].second;
    auto it = std::lower_bound(e.begin(), e.end(), q, [](const auto& entry, std::uint64_t v) { return entry.first < v; });
    if (it == e.end() || it->first != q) throw std::out_of_range("table has no entry for q = " + std::to_string(q));
    return it->second;
  }

  Kind kind_;
};

/// psi(q) as an exact rational, or a directed bound with error below 2^-64.
inline Rational psi_eval(const ApproximationFunction& f, std::uint64_t q, Rounding rounding) {
  const auto& kind = f.kind();
  if (rounding == Rounding::exact && (std::holds_alternative<ApproximationFunction::LogRefined>(kind) ||
                                      std::holds_alternative<ApproximationFunction::Ubiquity>(kind)))
    throw std::invalid_argument("exact evaluation requested for a logarithmic approximation function");
  const Bounds b = f.bounds(q);
  switch (rounding) {
    case Rounding::exact:
      if (!b.exact()) throw std::invalid_argument("psi(" + std::to_string(q) + ") is not rational for " + f.describe());
      return b.lower;
    case Rounding::lower: return b.lower;
    case Rounding::upper: return b.upper;
  }
  return b.lower;
}

namespace detail {
inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline long parse_long(std::string_view s, const char* what) {
  const Rational r = Rational::parse(s);
  if (!r.is_integer() || !r.numerator().fits_slong_p())
    throw std::invalid_argument(std::string(what) + ": expected an integer, got '" + std::string(s) + "'");
  return r.numerator().get_si();
}
}  // namespace detail

inline ApproximationFunction ApproximationFunction::parse(std::string_view spec, std::uint64_t table_limit) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("psi spec '" + std::string(spec) + "' lacks 'kind:'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = spec.substr(colon + 1);
  if (kind == "power") return power(Rational::parse(arg));
  if (kind == "recip") return scaled_reciprocal(Rational::parse(arg));
  if (kind == "logref") return log_refined(Rational::parse(arg));
  if (kind == "ubiq") {
    const auto parts = detail::split(arg, ',');
    if (parts.size() != 2) throw std::invalid_argument("ubiq spec expects 'ubiq:m,n'");
    return ubiquity(static_cast<int>(detail::parse_long(parts[0], "ubiq m")),
                    static_cast<int>(detail::parse_long(parts[1], "ubiq n")));
  }
  if (kind == "table") {
    std::vector<std::pair<std::uint64_t, Rational>> values;
    for (std::string_view item : detail::split(arg, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("table entries must look like q=value");
      const long q = detail::parse_long(item.substr(0, eq), "table q");
      if (q < 1) throw std::invalid_argument("table: q must be >= 1");
      values.emplace_back(static_cast<std::uint64_t>(q), Rational::parse(item.substr(eq + 1)));
    }
    return table(values);
  }
  if (kind == "invsqrt" || kind == "const") {
    if (table_limit == 0) throw std::invalid_argument(std::string(kind) + " spec needs a table range");
    const Rational c = Rational::parse(arg);
    if (c.sign() <= 0) throw std::invalid_argument(std::string(kind) + ": constant must be positive");
    return kind == "invsqrt" ? inverse_sqrt_table(c, table_limit) : constant_table(c, table_limit);
  }
  throw std::invalid_argument("unknown psi kind '" + std::string(kind) + "'");
}

}  // namespace diophlab
