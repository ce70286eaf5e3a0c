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

// Finite unions of half-open arcs on the circle T = [0,1) with rational
// endpoints, and their exact Boolean algebra.
//
// Internally a set is a sorted list of disjoint, non-adjacent linear pieces
// [lo, hi) with 0 <= lo < hi <= 1. An arc that wraps past 1 is stored as the
// two pieces [a, 1) and [0, b); `arcs()` glues them back together.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "diophlab/rational.hpp"

namespace diophlab {

/// A linear piece [lo, hi) of [0, 1].
struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A torus arc [start, end) with endpoints in [0, 1). end < start means the
/// arc wraps through 0. The full circle is reported as {0, 1}.
struct Arc {
  Rational start;
  Rational end;
  bool wraps() const { return end < start; }
  Rational length() const { return wraps() ? end - start + Rational(1) : end - start; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

enum class SetOp { unite, intersect, difference };

class TorusIntervalSet {
 public:
  TorusIntervalSet() = default;

  static TorusIntervalSet full() {
    TorusIntervalSet s;
    s.pieces_.push_back({Rational(0), Rational(1)});
    return s;
  }

  /// Projection of the real interval [a, b) onto the circle. Empty if b <= a.
  static TorusIntervalSet arc(const Rational& a, const Rational& b) {
    Builder builder;
    builder.add(a, b);
    return builder.build();
  }

  /// Projection of the open ball (c - r, c + r); boundary points carry no measure.
  static TorusIntervalSet centered(const Rational& center, const Rational& radius) {
    return arc(center - radius, center + radius);
  }

  /// Accumulates arbitrary real intervals and normalises them in one pass.
  class Builder {
   public:
    void reserve(std::size_t n) { pieces_.reserve(n); }

    void add(const Rational& a, const Rational& b) {
      if (full_ || b <= a) return;
      const Rational length = b - a;
      if (length >= Rational(1)) {
        full_ = true;
        return;
      }
      Rational lo = a.frac();
      Rational hi = lo + length;
      if (hi <= Rational(1)) {
        pieces_.push_back({std::move(lo), std::move(hi)});
      } else {
        pieces_.push_back({Rational(0), hi - Rational(1)});
        pieces_.push_back({std::move(lo), Rational(1)});
      }
    }

    /// Adds an already-reduced piece with 0 <= lo < hi <= 1.
    void add_piece(Rational lo, Rational hi) {
      if (!full_ && lo < hi) pieces_.push_back({std::move(lo), std::move(hi)});
    }

    TorusIntervalSet build() {
      if (full_) return full();
      std::sort(pieces_.begin(), pieces_.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
      TorusIntervalSet s;
      s.pieces_ = coalesce(std::move(pieces_));
      pieces_.clear();
      return s;
    }

   private:
    std::vector<Interval> pieces_;
    bool full_ = false;
  };

  /// Linear pieces in increasing order.
  std::span<const Interval> pieces() const { return pieces_; }

  /// Maximal arcs; at most one of them wraps.
  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    if (pieces_.empty()) return out;
    if (is_full()) return {Arc{Rational(0), Rational(1)}};
    std::size_t first = 0, last = pieces_.size();
    const bool wrap = pieces_.size() >= 2 && pieces_.front().lo.is_zero() && pieces_.back().hi == Rational(1);
    if (wrap) {
      ++first;
      --last;
    }
    for (std::size_t i = first; i < last; ++i) {
      const Interval& p = pieces_[i];
      out.push_back({p.lo, p.hi == Rational(1) ? Rational(0) : p.hi});
    }
    if (wrap) out.push_back({pieces_.back().lo, pieces_.front().hi});
    return out;
  }

  bool empty() const { return pieces_.empty(); }
  bool is_full() const { return pieces_.size() == 1 && pieces_[0].lo.is_zero() && pieces_[0].hi == Rational(1); }

  Rational measure() const {
    Rational total;
    for (const Interval& p : pieces_) total += p.hi - p.lo;
    return total;
  }

  bool contains(const Rational& x) const {
    const Rational y = x.frac();
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), y,
                               [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == pieces_.begin()) return false;
    --it;
    return y < it->hi;
  }

  /// The set translated by t on the circle.
  TorusIntervalSet rotated(const Rational& t) const {
    const Rational s = t.frac();
    if (s.is_zero() || pieces_.empty()) return *this;
    std::vector<Interval> head, tail;
    std::vector<Interval> out;
    out.reserve(pieces_.size() + 1);
    std::optional<Interval> split_hi;
    const Rational one(1);
    for (const Interval& p : pieces_) {
      Rational lo = p.lo + s;
      Rational hi = p.hi + s;
      if (hi <= one) {
        tail.push_back({std::move(lo), std::move(hi)});
      } else if (lo >= one) {
        head.push_back({lo - one, hi - one});
      } else {
        out.push_back({Rational(0), hi - one});
        split_hi = Interval{std::move(lo), one};
      }
    }
    for (auto& p : head) out.push_back(std::move(p));
    for (auto& p : tail) out.push_back(std::move(p));
    if (split_hi) out.push_back(std::move(*split_hi));
    TorusIntervalSet r;
    r.pieces_ = coalesce(std::move(out));
    return r;
  }

  TorusIntervalSet complement() const {
    TorusIntervalSet r;
    Rational cursor(0);
    for (const Interval& p : pieces_) {
      if (cursor < p.lo) r.pieces_.push_back({cursor, p.lo});
      cursor = p.hi;
    }
    if (cursor < Rational(1)) r.pieces_.push_back({cursor, Rational(1)});
    return r;
  }

  TorusIntervalSet unite(const TorusIntervalSet& other) const {
    std::vector<Interval> merged;
    merged.reserve(pieces_.size() + other.pieces_.size());
    std::merge(pieces_.begin(), pieces_.end(), other.pieces_.begin(), other.pieces_.end(), std::back_inserter(merged),
               [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    TorusIntervalSet r;
    r.pieces_ = coalesce(std::move(merged));
    return r;
  }

  TorusIntervalSet intersect(const TorusIntervalSet& other) const {
    TorusIntervalSet r;
    std::size_t i = 0, j = 0;
    const auto& a = pieces_;
    const auto& b = other.pieces_;
    while (i < a.size() && j < b.size()) {
      const Rational& lo = std::max(a[i].lo, b[j].lo);
      const Rational& hi = std::min(a[i].hi, b[j].hi);
      if (lo < hi) r.pieces_.push_back({lo, hi});
      if (a[i].hi < b[j].hi)
        ++i;
      else
        ++j;
    }
    r.pieces_ = coalesce(std::move(r.pieces_));
    return r;
  }

  TorusIntervalSet subtract(const TorusIntervalSet& other) const { return intersect(other.complement()); }

  friend bool operator==(const TorusIntervalSet&, const TorusIntervalSet&) = default;

 private:
  // Input sorted by lo; merges overlapping and touching pieces.
  static std::vector<Interval> coalesce(std::vector<Interval> sorted) {
    std::vector<Interval> out;
    out.reserve(sorted.size());
    for (auto& p : sorted) {
      if (!(p.lo < p.hi)) continue;
      if (!out.empty() && p.lo <= out.back().hi) {
        if (out.back().hi < p.hi) out.back().hi = std::move(p.hi);
      } else {
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  std::vector<Interval> pieces_;
};

inline TorusIntervalSet boolean_combine(const TorusIntervalSet& a, const TorusIntervalSet& b, SetOp op) {
  switch (op) {
    case SetOp::unite: return a.unite(b);
    case SetOp::intersect: return a.intersect(b);
    case SetOp::difference: return a.subtract(b);
  }
  return {};
}

inline TorusIntervalSet complement(const TorusIntervalSet& a) { return a.complement(); }
inline Rational measure(const TorusIntervalSet& a) { return a.measure(); }

}  // namespace diophlab
