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

// Neighbourhoods of resonant sets: the 1-D sets B(q; rho) on the circle,
// planar strip families B(q; rho) = {u in T^2 : ||q.u|| < rho}, Boolean
// expressions over strip families, and their exact area.
//
// Area is computed by sweeping slabs in u1. Inside a slab the u2-slice of
// every strip family is a rotation of a fixed 1-D set, each boundary point
// moving affinely in u1, so the slice measure of any Boolean combination is
// affine as long as no two boundary points cross. The slab breakpoints are
// exactly those crossings; the slab area is width times the slice measure at
// the slab midpoint.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diophlab/numth.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rational.hpp"
#include "diophlab/torus_set.hpp"

namespace diophlab {

inline const Rational& half() {
  static const Rational h(BigInt(1), BigInt(2));
  return h;
}

/// B(q; rho) = union over p of the arcs (p/q - rho/q, p/q + rho/q) on [0, 1).
inline TorusIntervalSet build_B_1d(std::uint64_t q, const Rational& rho) {
  if (q == 0) throw std::invalid_argument("build_B_1d: q must be >= 1");
  if (rho.sign() <= 0) throw std::invalid_argument("build_B_1d: rho must be positive");
  if (rho >= half()) return TorusIntervalSet::full();
  const Rational qq(q);
  const Rational radius = rho / qq;
  TorusIntervalSet::Builder builder;
  builder.reserve(q + 1);
  builder.add_piece(Rational(0), radius);
  for (std::uint64_t p = 1; p < q; ++p) {
    const Rational centre = Rational(p) / qq;
    builder.add_piece(centre - radius, centre + radius);
  }
  builder.add_piece(Rational(1) - radius, Rational(1));
  return builder.build();
}

/// The strip family B(q; rho) on T^2 for q in Z^2 \ {0}.
class StripFamily {
 public:
  StripFamily(const LatticeVector& q, const Rational& rho) : q_(q), rho_(rho) {
    if (q.dimension() != 2) throw std::invalid_argument("strip family needs q in Z^2");
    if (q.is_zero()) throw std::invalid_argument("strip family needs q != (0,0)");
    if (rho.sign() <= 0) throw std::invalid_argument("strip family needs rho > 0");
    const long lo = std::min(0L, q1()) + std::min(0L, q2());
    const long hi = std::max(0L, q1()) + std::max(0L, q2());
    for (long p = lo - 1; p <= hi + 1; ++p) {
      // |q.u - p| < rho for some u in the closed unit square.
      if (Rational(p) > Rational(lo) - rho && Rational(p) < Rational(hi) + rho) offsets_.push_back(p);
    }
    if (!covers_torus() && q2() != 0)
      base_slice_ = std::make_shared<const TorusIntervalSet>(build_B_1d(static_cast<std::uint64_t>(std::labs(q2())), rho_));
  }

  const LatticeVector& q() const { return q_; }
  long q1() const { return q_.components[0]; }
  long q2() const { return q_.components[1]; }
  const Rational& rho() const { return rho_; }
  /// Integers p whose strip |q.u - p| < rho meets [0, 1]^2.
  const std::vector<long>& offsets() const { return offsets_; }
  bool covers_torus() const { return rho_ >= half(); }

  /// Closed-form area min(2 rho, 1).
  Rational area() const { return covers_torus() ? Rational(1) : Rational(2) * rho_; }

  bool contains(const Rational& u1, const Rational& u2) const {
    return nearest_int_distance(Rational(q1()) * u1 + Rational(q2()) * u2) < rho_;
  }

  /// {u2 : (x, u2) in the family}.
  TorusIntervalSet slice(const Rational& x) const {
    if (covers_torus()) return TorusIntervalSet::full();
    if (q2() == 0)
      return nearest_int_distance(Rational(q1()) * x) < rho_ ? TorusIntervalSet::full() : TorusIntervalSet{};
    return base_slice_->rotated(-(Rational(q1()) * x) / Rational(q2()));
  }

 private:
  LatticeVector q_;
  Rational rho_;
  std::vector<long> offsets_;
  std::shared_ptr<const TorusIntervalSet> base_slice_;
};

inline StripFamily build_strips_2d(const LatticeVector& q, const Rational& rho) { return StripFamily(q, rho); }

/// Boolean expression over strip families. A default-constructed expression
/// is the empty region.
class RegionExpr {
 public:
  RegionExpr() = default;

  static RegionExpr leaf(StripFamily s) {
    auto n = std::make_shared<Node>();
    n->type = Type::leaf;
    n->strip = std::make_shared<const StripFamily>(std::move(s));
    return RegionExpr(std::move(n));
  }
  static RegionExpr unite(std::vector<RegionExpr> parts) { return combine(Type::unite, std::move(parts)); }
  static RegionExpr intersect(std::vector<RegionExpr> parts) { return combine(Type::intersect, std::move(parts)); }
  static RegionExpr complement(RegionExpr e) { return combine(Type::complement, {std::move(e)}); }

  friend RegionExpr operator|(RegionExpr a, RegionExpr b) { return unite({std::move(a), std::move(b)}); }
  friend RegionExpr operator&(RegionExpr a, RegionExpr b) { return intersect({std::move(a), std::move(b)}); }
  friend RegionExpr operator~(RegionExpr a) { return complement(std::move(a)); }

  /// Distinct leaves in first-visit order.
  std::vector<const StripFamily*> leaves() const {
    std::vector<const StripFamily*> out;
    collect(root_.get(), out);
    return out;
  }

  bool contains(const Rational& u1, const Rational& u2) const { return contains(root_.get(), u1, u2); }

  TorusIntervalSet slice(const Rational& x) const { return slice(root_.get(), x); }

 private:
  enum class Type { leaf, unite, intersect, complement };
  struct Node {
    Type type = Type::leaf;
    std::shared_ptr<const StripFamily> strip;
    std::vector<RegionExpr> children;
  };

  explicit RegionExpr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}

  static RegionExpr combine(Type t, std::vector<RegionExpr> parts) {
    auto n = std::make_shared<Node>();
    n->type = t;
    n->children = std::move(parts);
    return RegionExpr(std::move(n));
  }

  static void collect(const Node* n, std::vector<const StripFamily*>& out) {
    if (n == nullptr) return;
    if (n->type == Type::leaf) {
      if (std::find(out.begin(), out.end(), n->strip.get()) == out.end()) out.push_back(n->strip.get());
      return;
    }
    for (const auto& c : n->children) collect(c.root_.get(), out);
  }

  static bool contains(const Node* n, const Rational& u1, const Rational& u2) {
    if (n == nullptr) return false;
    switch (n->type) {
      case Type::leaf: return n->strip->contains(u1, u2);
      case Type::unite:
        return std::any_of(n->children.begin(), n->children.end(),
                           [&](const RegionExpr& c) { return contains(c.root_.get(), u1, u2); });
      case Type::intersect:
        return std::all_of(n->children.begin(), n->children.end(),
                           [&](const RegionExpr& c) { return contains(c.root_.get(), u1, u2); });
      case Type::complement: return !contains(n->children[0].root_.get(), u1, u2);
    }
    return false;
  }

  static TorusIntervalSet slice(const Node* n, const Rational& x) {
    if (n == nullptr) return {};
    switch (n->type) {
      case Type::leaf: return n->strip->slice(x);
      case Type::unite: {
        TorusIntervalSet acc;
        for (const auto& c : n->children) acc = acc.unite(slice(c.root_.get(), x));
        return acc;
      }
      case Type::intersect: {
        TorusIntervalSet acc = TorusIntervalSet::full();
        for (const auto& c : n->children) {
          acc = acc.intersect(slice(c.root_.get(), x));
          if (acc.empty()) break;
        }
        return acc;
      }
      case Type::complement: return slice(n->children[0].root_.get(), x).complement();
    }
    return {};
  }

  std::shared_ptr<const Node> root_;
};

namespace detail {

// x in (0, 1) where (m + sigma rho)/q1 hits an integer m, for a family with q2 = 0.
inline void vertical_breakpoints(const StripFamily& s, std::vector<Rational>& out) {
  const long a = std::labs(s.q1());
  for (long p = -1; p <= a + 1; ++p) {
    for (int sigma : {-1, 1}) {
      const Rational x = (Rational(p) + Rational(sigma) * s.rho()) / Rational(a);
      if (x.sign() > 0 && x < Rational(1)) out.push_back(x);
    }
  }
}

// x in (0, 1) where a boundary line of `a` meets a boundary line of `b` on
// the torus. With u2 = (p + sa*rho_a - a1 x)/a2 and the analogue for b,
// equality mod 1 reduces to x (b1 a2 - a1 b2) = sb a2 rho_b - sa b2 rho_a + t g,
// g = gcd(a2, b2), t ranging over Z.
inline void crossing_breakpoints(const StripFamily& a, const StripFamily& b, std::vector<Rational>& out) {
  const long a1 = a.q1(), a2 = a.q2(), b1 = b.q1(), b2 = b.q2();
  long det = b1 * a2 - a1 * b2;
  if (det == 0) return;
  const long g = std::gcd(std::labs(a2), std::labs(b2));
  const int flip = det < 0 ? -1 : 1;
  det = std::labs(det);
  const Rational rg(g), rdet(det);
  for (int sa : {-1, 1}) {
    for (int sb : {-1, 1}) {
      const Rational base = Rational(flip) * (Rational(sb * a2) * b.rho() - Rational(sa * b2) * a.rho());
      // 0 < base + t g < det
      const BigInt t_lo = ((-base) / rg).floor() + 1;
      const BigInt t_hi = ((rdet - base) / rg).ceil() - 1;
      for (BigInt t = t_lo; t <= t_hi; ++t) out.push_back((base + Rational(t) * rg) / rdet);
    }
  }
}

}  // namespace detail

/// Sorted slab boundaries in [0, 1] for the sweep, including 0 and 1.
inline std::vector<Rational> sweep_breakpoints(const RegionExpr& e) {
  std::vector<const StripFamily*> active;
  for (const StripFamily* s : e.leaves())
    if (!s->covers_torus()) active.push_back(s);
  std::vector<Rational> xs{Rational(0), Rational(1)};
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i]->q2() == 0) {
      detail::vertical_breakpoints(*active[i], xs);
      continue;
    }
    for (std::size_t j = i + 1; j < active.size(); ++j)
      if (active[j]->q2() != 0) detail::crossing_breakpoints(*active[i], *active[j], xs);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Exact area of a region on T^2.
inline Rational area_2d(const RegionExpr& e) {
  if (e.leaves().empty()) return Rational(e.slice(Rational(0)).measure());
  const std::vector<Rational> xs = sweep_breakpoints(e);
  const std::size_t slabs = xs.size() - 1;
  const auto parts = parallel_map<Rational>(slabs, [&](std::size_t i) {
    const Rational width = xs[i + 1] - xs[i];
    const Rational mid = (xs[i] + xs[i + 1]) / Rational(2);
    return width * e.slice(mid).measure();
  });
  Rational total;
  for (const Rational& p : parts) total += p;
  return total;
}

enum class NeighborhoodDirection { tilde_to_B, B_to_tilde_outer, B_to_tilde_inner };

/// How the input neighbourhood relates to the returned one.
enum class SetRelation { equal, input_subset, input_superset };

/// Neighbourhood of R_q described by a vector and a radius. `tilde` marks the
/// sup-norm neighbourhood B~(q; radius); otherwise it is B(q; radius).
struct Neighborhood {
  LatticeVector q;
  Rational radius;
  bool tilde = false;
  SetRelation relation = SetRelation::equal;
};

/// Converts between B~(q; delta) = {X : dist_inf(X, R_q) < delta} and
/// B(q; delta) = {X : ||q.X|| < delta}. The sup-norm distance from X to the
/// hyperplane q.X = p is |q.X - p|/|q|_1, so for m <= 2 the two families
/// coincide after rescaling by |q|_1; for m >= 3 the general inclusions
/// B~(q; delta/(m|q|)) <= B(q; delta) <= B~(q; delta/|q|) are returned.
inline Neighborhood neighborhood_convert(const LatticeVector& q, const Rational& delta, NeighborhoodDirection dir) {
  if (q.dimension() == 0 || q.is_zero()) throw std::invalid_argument("neighborhood_convert needs q != 0");
  if (delta.sign() <= 0) throw std::invalid_argument("neighborhood_convert needs delta > 0");
  const bool exact = q.dimension() <= 2;
  const Rational one_norm(q.one_norm());
  const Rational sup(q.sup_norm());
  const Rational m(static_cast<long>(q.dimension()));
  switch (dir) {
    case NeighborhoodDirection::tilde_to_B:
      if (exact) return {q, delta * one_norm, false, SetRelation::equal};
      return {q, delta * m * sup, false, SetRelation::input_subset};
    case NeighborhoodDirection::B_to_tilde_outer:
      if (exact) return {q, delta / one_norm, true, SetRelation::equal};
      return {q, delta / sup, true, SetRelation::input_subset};
    case NeighborhoodDirection::B_to_tilde_inner:
      if (exact) return {q, delta / one_norm, true, SetRelation::equal};
      return {q, delta / (m * sup), true, SetRelation::input_superset};
  }
  throw std::invalid_argument("unknown neighbourhood direction");
}

}  // namespace diophlab
