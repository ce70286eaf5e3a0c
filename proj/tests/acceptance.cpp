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

// Acceptance suite: one PASS/FAIL line per criterion. Every criterion is
// evaluated with 1 and with 8 worker threads; its report must not change.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "diophlab/dimension.hpp"
#include "diophlab/limsup_sets.hpp"
#include "diophlab/metrics.hpp"
#include "diophlab/numth.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/report.hpp"

namespace {

using namespace diophlab;
using Json = cli::Json;

Rational r(long n, long d = 1) { return Rational(BigInt(n), BigInt(d)); }

struct Outcome {
  bool pass = true;
  std::string detail;
  Json report = Json::object();
  std::vector<std::pair<std::string, double>> timed;  // (label, limit s) checked against sub-timings
  std::vector<double> seconds;
};

struct Criterion {
  int id;
  std::string title;
  double limit;  ///< seconds for the whole criterion, 0: per-part limits in Outcome::timed
  std::function<Outcome()> run;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

// 1 -------------------------------------------------------------------------
Outcome strip_measure() {
  std::mt19937_64 rng(101);
  Outcome o;
  int equal = 0;
  Json areas = Json::array();
  for (int i = 0; i < 500; ++i) {
    long a = 0, b = 0;
    while (a == 0 && b == 0) {
      a = static_cast<long>(rng() % 101) - 50;
      b = static_cast<long>(rng() % 101) - 50;
    }
    const long den = 3 + static_cast<long>(rng() % 998);
    const long num = 1 + static_cast<long>(rng() % ((den - 1) / 2));  // rho < 1/2
    const Rational rho = r(num, den);
    const Rational area = area_2d(RegionExpr::leaf(build_strips_2d(LatticeVector{{a, b}}, rho)));
    if (area == Rational(2) * rho) ++equal;
    areas.push_back(area.to_string());
  }
  o.pass = equal == 500;
  o.detail = std::to_string(equal) + "/500 areas equal 2 rho";
  o.report["areas"] = areas;
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome independence() {
  std::mt19937_64 rng(202);
  Outcome o;
  int equal = 0, pairs = 0;
  Json areas = Json::array();
  auto coord = [&] { return static_cast<long>(rng() % 41) - 20; };
  auto radius = [&] {
    const long den = 10 + static_cast<long>(rng() % 191);
    return r(1 + static_cast<long>(rng() % (den / 10)), den);  // <= 1/10
  };
  while (pairs < 200) {
    const LatticeVector q{{coord(), coord()}}, qp{{coord(), coord()}};
    if (q.components[0] * qp.components[1] == q.components[1] * qp.components[0]) continue;
    if (q.is_zero() || qp.is_zero()) continue;
    const Rational rho = radius(), rhop = radius();
    const Rational area =
        area_2d(RegionExpr::leaf(build_strips_2d(q, rho)) & RegionExpr::leaf(build_strips_2d(qp, rhop)));
    if (area == Rational(4) * rho * rhop) ++equal;
    areas.push_back(area.to_string());
    ++pairs;
  }
  const Rational tenth = r(1, 10);
  const Rational collinear = area_2d(RegionExpr::leaf(build_strips_2d(LatticeVector{{1, -2}}, tenth)) &
                                     RegionExpr::leaf(build_strips_2d(LatticeVector{{2, -4}}, tenth)));
  o.pass = equal == 200 && collinear == tenth && collinear != r(1, 25);
  o.detail = std::to_string(equal) + "/200 equal 4 rho rho'; collinear (1,-2),(2,-4) area " + collinear.to_string();
  o.report["areas"] = areas;
  o.report["collinear"] = collinear.to_string();
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome totient_summatory() {
  Outcome o;
  for (long n : {100L, 1000L, 10000L}) {
    cli::RunConfig c;
    c.subcommand = "totient-sum";
    c.params = {{"n", std::to_string(n)}};
    const Json res = cli::run(c).doc["results"];
    const Rational e = Rational::parse(res["normalized_error_upper"].get<std::string>());
    o.pass = o.pass && e < Rational(1);
    o.detail += "N=" + std::to_string(n) + ": Phi=" + std::to_string(res["phi_sum"].get<std::uint64_t>()) +
                " err<=" + e.to_decimal(4) + (n == 10000 ? "" : "; ");
    o.report[std::to_string(n)] = res;
  }
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome shell_counts() {
  Outcome o;
  int brute_ok = 0, phi_ok = 0;
  Json cards = Json::array();
  for (long k = 1; k <= 500; ++k) {
    const std::uint64_t card = shell_cardinality(2, k);
    std::uint64_t brute = 0;  // primitive (a, b) with max(|a|, |b|) = k and b >= 1
    for (long a = -k; a <= k; ++a)
      for (long b = 1; b <= k; ++b)
        if (std::max(std::labs(a), b) == k && std::gcd(a, b) == 1) ++brute;
    if (card == brute) ++brute_ok;
    if (k >= 2 && card == 4 * totient(static_cast<std::uint64_t>(k))) ++phi_ok;
    cards.push_back(card);
  }
  o.pass = brute_ok == 500 && phi_ok == 499;
  o.detail = std::to_string(brute_ok) + "/500 match enumeration, " + std::to_string(phi_ok) + "/499 equal 4 phi(k)";
  o.report["cardinalities"] = cards;
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome dirichlet() {
  std::mt19937_64 rng(505);
  Outcome o;
  int ok = 0;
  Json qs = Json::array();
  for (int i = 0; i < 1000; ++i) {
    const long den = 1 + static_cast<long>(rng() % 1000000);
    const Rational alpha = r(static_cast<long>(rng() % (den + 1)), den);
    for (long n : {10L, 100L}) {
      const auto d = dirichlet_approx(alpha, static_cast<std::uint64_t>(n));
      const Rational err = abs(alpha - Rational(d.p, d.q));
      const bool pass = d.q >= 1 && d.q <= n && err <= Rational(BigInt(1), d.q * BigInt(n + 1));
      if (pass) ++ok;
      qs.push_back(d.p.get_str() + "/" + d.q.get_str());
    }
  }
  o.pass = ok == 2000;
  o.detail = std::to_string(ok) + "/2000 approximations satisfy |alpha - p/q| <= 1/(q(N+1))";
  o.report["approximations"] = qs;
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome counting() {
  std::mt19937_64 rng(606);
  Outcome o;
  const std::uint64_t n = 1000000;
  const auto psi = ApproximationFunction::inverse_sqrt_table(r(1, 2), n);
  double lo = 1e9, hi = 0;
  Json runs = Json::array();
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t den = (std::uint64_t{1} << 63) | rng();
    const std::uint64_t num = rng() % den;
    const Rational alpha(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
    const auto res = count_solutions(alpha, psi, n);
    const Rational c(BigInt(static_cast<unsigned long>(res.count)));
    const Rational c_hi(BigInt(static_cast<unsigned long>(res.count + res.undecided)));
    const Rational ratio_lo = c / res.asymptote.upper, ratio_hi = c_hi / res.asymptote.lower;
    o.pass = o.pass && ratio_lo >= r(9, 10) && ratio_hi <= r(11, 10);
    lo = std::min(lo, ratio_lo.to_double());
    hi = std::max(hi, ratio_hi.to_double());
    runs.push_back({{"alpha", alpha.to_string()}, {"count", res.count}, {"undecided", res.undecided},
                    {"asymptote_lower", res.asymptote.lower.to_string()},
                    {"asymptote_upper", res.asymptote.upper.to_string()}});
  }
  o.detail = "count / (2 sum psi) in [" + fmt(lo, "%.4f") + ", " + fmt(hi, "%.4f") + "] over 20 alpha, N=10^6";
  o.report["runs"] = runs;
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome khintchine() {
  Outcome o;
  const auto series =
      khintchine_union_series(ApproximationFunction::scaled_reciprocal(r(1, 4)), {1, 2, 5, 25, 100, 400});
  bool increasing = true;
  Json measures = Json::array();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0 && !(series[i - 1].measure < series[i].measure)) increasing = false;
    measures.push_back(series[i].measure.to_string());
  }
  bool tails = true;
  Json tail_json = Json::object();
  std::string tail_text;
  for (std::uint64_t n : {10, 100}) {
    const auto t = power_tail_bound(r(2), n);
    tails = tails && t.tail.upper < Rational(BigInt(2), BigInt(static_cast<unsigned long>(n)));
    tail_json[std::to_string(n)] = {t.tail.lower.to_string(), t.tail.upper.to_string()};
    tail_text += " N=" + std::to_string(n) + ": tail<=" + t.tail.upper.to_decimal(5);
  }
  o.pass = series[0].measure == r(1, 2) && series[1].measure == r(5, 8) && increasing && tails;
  o.detail = "U(1)=" + series[0].measure.to_string() + " U(2)=" + series[1].measure.to_string() +
             " U(400)=" + series.back().measure.to_decimal(6) + (increasing ? " strictly increasing;" : " NOT increasing;") +
             tail_text;
  o.report["measures"] = measures;
  o.report["tails"] = tail_json;
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome borel_cantelli() {
  Outcome o;
  std::vector<TorusIntervalSet> sets;
  for (unsigned j = 1; j <= 10; ++j) sets.push_back(dyadic_digit_set(j));
  const Rational bc10 = bc_lower_bound(sets);
  const Rational q10 = quasi_independence_constant(sets);
  const auto [m, p] = dyadic_digit_family_measures(100);
  const Rational bc100 = bc_lower_bound(m, p);
  const Rational q100 = quasi_independence_constant(m, p);
  o.pass = bc10 == r(10, 11) && bc100 == r(100, 101) && q10 == r(1) && q100 == r(1);
  o.detail = "bound(10)=" + bc10.to_string() + " (interval sets), bound(100)=" + bc100.to_string() +
             " (closed form), C=" + q10.to_string() + ", " + q100.to_string();
  o.report = {{"bc10", bc10.to_string()}, {"bc100", bc100.to_string()}, {"q10", q10.to_string()},
              {"q100", q100.to_string()}};
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome ubiquity() {
  Outcome o;
  const auto rho = ApproximationFunction::ubiquity(1, 1);
  const auto d10 = ubiquity_defect(UbiquityCase::line, 10, rho);
  const auto d1000 = ubiquity_defect(UbiquityCase::line, 1000, rho);
  const auto fixed = ubiquity_defect(UbiquityCase::line, 2, ApproximationFunction::constant_table(r(1, 8), 2));
  const bool trend = d1000.defect < d10.defect;
  o.pass = trend && fixed.defect == r(1, 2);
  o.detail = "defect(10)=" + d10.defect.to_decimal(6) + " defect(1000)=" + d1000.defect.to_decimal(6) +
             (trend ? "" : " (defect(1000) >= defect(10))") + " [upper bounds, rho~ rounded down]; rho~=1/8, N=2: " +
             fixed.defect.to_string();
  o.report = {{"defect10", d10.defect.to_string()}, {"defect1000", d1000.defect.to_string()},
              {"fixed", fixed.defect.to_string()}, {"rounding", "rho~ lower, defect upper bound"}};
  return o;
}

// 10 ------------------------------------------------------------------------
std::map<long, double> critical_estimates;

Outcome critical_exponent() {
  Outcome o;
  for (long v : {2L, 3L, 5L}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = critical_exponent_estimate(r(v), std::uint64_t{1} << 14);
    o.seconds.push_back(elapsed(t0));
    o.timed.emplace_back("v=" + std::to_string(v), 60.0);
    const double target = 2.0 / static_cast<double>(v + 1);
    o.pass = o.pass && std::fabs(est.estimate - target) <= 0.05;
    critical_estimates[v] = est.estimate;
    o.detail += "v=" + std::to_string(v) + ": " + fmt(est.estimate, "%.4f") + " vs " + fmt(target, "%.4f") + "; ";
    o.report[std::to_string(v)] = fmt(est.estimate, "%.12g");
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 11 ------------------------------------------------------------------------
Outcome box_counting() {
  Outcome o;
  std::vector<std::uint64_t> ladder;
  for (unsigned j = 6; j <= 12; ++j) ladder.push_back(std::uint64_t{1} << j);
  for (long v : {3L, 5L}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = box_counting_estimate(r(v), ladder);
    o.seconds.push_back(elapsed(t0));
    o.timed.emplace_back("v=" + std::to_string(v), 120.0);
    const double target = 2.0 / static_cast<double>(v + 1);
    double crit = critical_estimates.count(v) ? critical_estimates[v]
                                              : critical_exponent_estimate(r(v), std::uint64_t{1} << 14).estimate;
    o.pass = o.pass && std::fabs(est.slope - target) <= 0.1 && std::fabs(est.slope - crit) <= 0.1;
    o.detail += "v=" + std::to_string(v) + ": slope " + fmt(est.slope, "%.4f") + " vs " + fmt(target, "%.4f") +
                ", critical " + fmt(crit, "%.4f") + "; ";
    Json counts = Json::array();
    for (const auto& p : est.points) counts.push_back(p.boxes);
    o.report[std::to_string(v)] = {{"slope", fmt(est.slope, "%.12g")}, {"boxes", counts}};
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 12 ------------------------------------------------------------------------
Outcome formulae() {
  Outcome o;
  const bool examples =
      jb_dimension(1, 1, r(3)) == r(1, 2) && jb_dimension(2, 1, r(3)) == r(7, 4) && jb_dimension(2, 1, r(1)) == r(2);
  std::mt19937_64 rng(1212);
  int ok = 0, cases = 0;
  Json dims = Json::array();
  while (cases < 50) {
    const int m = 1 + static_cast<int>(rng() % 5), n = 1 + static_cast<int>(rng() % 5);
    const Rational v(BigInt(1 + static_cast<long>(rng() % 100)), BigInt(1 + static_cast<long>(rng() % 10)));
    if (!(v > Rational(m) / Rational(n))) continue;
    ++cases;
    const Rational jb = jb_dimension(m, n, v);
    const Rational gamma = gamma_exponent(m, n, v).gamma;
    if (Rational((m - 1) * n) + gamma * Rational(n) == jb) ++ok;
    dims.push_back(jb.to_string());
  }
  o.pass = examples && ok == 50;
  o.detail = std::string(examples ? "1/2, 7/4, 2 reproduced" : "examples differ") + "; " + std::to_string(ok) +
             "/50 satisfy (m-1)n + gamma n = dim";
  o.report["dims"] = dims;
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact strip measure", 60, strip_measure},
      {2, "exact independence", 120, independence},
      {3, "totient summatory", 5, totient_summatory},
      {4, "shell counts", 30, shell_counts},
      {5, "Dirichlet", 10, dirichlet},
      {6, "counting asymptotic", 120, counting},
      {7, "Khintchine divergence trend", 60, khintchine},
      {8, "Borel-Cantelli bound", 5, borel_cantelli},
      {9, "ubiquity defect", 30, ubiquity},
      {10, "critical exponent", 0, critical_exponent},
      {11, "box counting", 0, box_counting},
      {12, "formula evaluators", 1, formulae},
  };

  int failures = 0;
  std::vector<int> nondeterministic;
  for (const auto& c : criteria) {
    set_thread_count(1);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome single = c.run();
    const double seconds = elapsed(t0);
    set_thread_count(8);
    const Outcome multi = c.run();
    if (single.report.dump() != multi.report.dump()) nondeterministic.push_back(c.id);

    std::string timing = fmt(seconds, "%.2f") + " s";
    bool in_time = c.limit <= 0 || seconds <= c.limit;
    if (c.limit > 0) timing += " <= " + fmt(c.limit, "%g") + " s";
    for (std::size_t i = 0; i < single.timed.size(); ++i) {
      in_time = in_time && single.seconds[i] <= single.timed[i].second;
      timing += "; " + single.timed[i].first + " " + fmt(single.seconds[i], "%.2f") + " s <= " +
                fmt(single.timed[i].second, "%g") + " s";
    }
    const bool pass = single.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  [%2d] %s: %s%s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), single.detail.c_str(),
                in_time ? "" : " -- over time limit", timing.c_str());
    std::fflush(stdout);
  }

  const bool deterministic = nondeterministic.empty();
  std::string which;
  for (int id : nondeterministic) which += " " + std::to_string(id);
  std::printf("%s  [13] determinism: %s\n", deterministic ? "PASS" : "FAIL",
              deterministic ? "reports of criteria 1-12 byte-identical with 1 and 8 threads"
                            : ("reports differ for criteria" + which).c_str());
  if (!deterministic) ++failures;
  std::printf("%d/13 criteria passed\n", 13 - failures);
  return failures == 0 ? 0 : 1;
}
