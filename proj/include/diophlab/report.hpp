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

// Experiment runner behind the command-line tool: a registry of
// subcommands, exact-first JSON reports, and CSV / plotdata emitters.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diophlab/approximation.hpp"
#include "diophlab/dimension.hpp"
#include "diophlab/directed.hpp"
#include "diophlab/limsup_sets.hpp"
#include "diophlab/metrics.hpp"
#include "diophlab/numth.hpp"
#include "diophlab/rational.hpp"

namespace diophlab::cli {

using Json = nlohmann::ordered_json;

/// Bad input: unknown subcommand, malformed value, or a breached
/// precondition. Maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { json, csv, plotdata };

inline std::string format_name(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::plotdata: return "plotdata";
  }
  return "json";
}

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "plotdata") return Format::plotdata;
  throw UsageError("unknown format '" + std::string(s) + "' (json, csv, plotdata)");
}

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;  ///< raw values; defaults filled in by run()
  std::uint64_t seed = 1;
  Format format = Format::json;
  std::string output = "-";  ///< "-" writes the report to standard output
};

/// A finished run. `doc` is canonical; CSV and plotdata are views of it.
struct ExperimentReport {
  Json doc;

  bool has_series() const { return doc.contains("series") && !doc["series"]["points"].empty(); }
  std::string to_json() const { return doc.dump(2) + "\n"; }
};

// ---------------------------------------------------------------------------
// Parameter parsing

namespace detail {

inline long parse_integer(const std::string& name, const std::string& text, long min) {
  long value = 0;
  try {
    value = diophlab::detail::parse_long(text, name.c_str());
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + name + ": expected an integer, got '" + text + "'");
  }
  if (value < min) throw UsageError("--" + name + " must be >= " + std::to_string(min));
  return value;
}

inline Rational parse_rational(const std::string& name, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("--" + name + ": malformed rational '" + text + "' (expected n or n/d)");
  }
}

inline std::vector<long> parse_list(const std::string& name, const std::string& text) {
  std::vector<long> out;
  for (std::string_view item : diophlab::detail::split(text, ','))
    out.push_back(parse_integer(name, std::string(item), std::numeric_limits<long>::min()));
  if (out.empty()) throw UsageError("--" + name + ": empty list");
  return out;
}

inline LatticeVector parse_vector(const std::string& name, const std::string& text) {
  const auto parts = parse_list(name, text);
  if (parts.size() != 2) throw UsageError("--" + name + ": expected two components 'a,b'");
  return LatticeVector{parts};
}

inline std::vector<std::uint64_t> parse_ladder(const std::string& name, const std::string& text) {
  std::vector<std::uint64_t> out;
  for (long v : parse_list(name, text)) {
    if (v < 1) throw UsageError("--" + name + ": entries must be positive");
    if (!out.empty() && static_cast<std::uint64_t>(v) <= out.back())
      throw UsageError("--" + name + ": entries must be strictly increasing");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

inline ApproximationFunction parse_psi(const std::string& name, const std::string& text, std::uint64_t table_limit) {
  try {
    return ApproximationFunction::parse(text, table_limit);
  } catch (const std::exception& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string vector_string(const LatticeVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.components.size(); ++i) s += (i ? "," : "") + std::to_string(v.components[i]);
  return s;
}

}  // namespace detail

/// Typed view of the resolved parameters of one run.
class Params {
 public:
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  const std::string& text(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end() || it->second.empty()) throw UsageError("missing required option --" + name);
    return it->second;
  }
  bool has(const std::string& name) const {
    const auto it = values_.find(name);
    return it != values_.end() && !it->second.empty();
  }
  long integer(const std::string& name, long min = 1) const { return detail::parse_integer(name, text(name), min); }
  Rational rational(const std::string& name) const { return detail::parse_rational(name, text(name)); }
  LatticeVector vector(const std::string& name) const { return detail::parse_vector(name, text(name)); }
  std::vector<std::uint64_t> ladder(const std::string& name) const { return detail::parse_ladder(name, text(name)); }
  ApproximationFunction psi(const std::string& name, std::uint64_t table_limit) const {
    return detail::parse_psi(name, text(name), table_limit);
  }
  const std::map<std::string, std::string>& all() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Accumulates the flat "results" object and the optional series.
class ReportBuilder {
 public:
  void put(const std::string& key, Json value) { results_[key] = std::move(value); }
  void put_rational(const std::string& key, const Rational& r) {
    results_[key] = r.to_string();
    results_[key + "_decimal"] = r.to_decimal();
  }
  void put_bounds(const std::string& key, const Bounds& b) {
    put_rational(key + "_lower", b.lower);
    put_rational(key + "_upper", b.upper);
  }
  void set_rounding(const std::string& mode, const std::string& note) {
    rounding_ = Json::object();
    rounding_["mode"] = mode;
    rounding_["note"] = note;
  }
  void start_series(const std::string& x, const std::string& y) {
    series_ = Json::object();
    series_["x"] = x;
    series_["y"] = y;
    series_["points"] = Json::array();
  }
  void add_point(Json point) { series_["points"].push_back(std::move(point)); }

  Json results() const { return results_; }
  const Json& rounding() const { return rounding_; }
  const Json& series() const { return series_; }

 private:
  Json results_ = Json::object();
  Json rounding_ = {{"mode", "exact"}, {"note", "all reported rationals are exact"}};
  Json series_;
};

struct ParamSpec {
  std::string name;
  std::string default_value;  ///< empty: required (or optional when `optional`)
  std::string help;
  bool optional = false;
};

struct Subcommand {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::vector<std::string> csv_columns;  ///< series point keys, or results keys
  bool series = false;
  std::function<void(const Params&, std::uint64_t seed, ReportBuilder&)> run;
};

// ---------------------------------------------------------------------------
// Families for the Borel-Cantelli experiments

namespace detail {

struct Family {
  std::string construction;           ///< interval_sets | closed_form
  std::vector<TorusIntervalSet> sets;  // empty for closed_form
  std::vector<Rational> measures;
  PairMatrix pairs;
};

inline Family make_family(const Params& p, std::uint64_t seed) {
  const std::string& kind = p.text("family");
  const long n = p.integer("n");
  Family f;
  if (kind == "dyadic") {
    if (n > 24) {
      auto [m, pairs] = dyadic_digit_family_measures(static_cast<std::size_t>(n));
      f.construction = "closed_form";
      f.measures = std::move(m);
      f.pairs = std::move(pairs);
      return f;
    }
    for (long j = 1; j <= n; ++j) f.sets.push_back(dyadic_digit_set(static_cast<unsigned>(j)));
  } else if (kind == "b1d") {
    const auto psi = p.psi("psi", static_cast<std::uint64_t>(n));
    for (long q = 1; q <= n; ++q) {
      const Bounds b = psi.bounds(static_cast<std::uint64_t>(q));
      if (!b.exact()) throw UsageError("--psi: the b1d family needs rational psi values");
      f.sets.push_back(build_B_1d(static_cast<std::uint64_t>(q), b.lower));
    }
  } else if (kind == "random") {
    // Arcs with dyadic endpoints (16 bits), lengths in (0, 1/2].
    std::mt19937_64 rng(seed);
    const Rational unit(BigInt(1), BigInt(1) << 16);
    for (long k = 0; k < n; ++k) {
      const Rational start = Rational(static_cast<long>(rng() & 0xffff)) * unit;
      const Rational length = Rational(static_cast<long>(1 + (rng() & 0x7fff))) * unit;
      f.sets.push_back(TorusIntervalSet::arc(start, start + length));
    }
  } else {
    throw UsageError("--family must be one of dyadic, b1d, random");
  }
  f.construction = "interval_sets";
  for (const auto& s : f.sets) f.measures.push_back(s.measure());
  f.pairs = pair_measure_matrix(f.sets);
  return f;
}

inline std::pair<std::vector<Rational>, PairMatrix> prefix(const Family& f, std::size_t n) {
  std::vector<Rational> m(f.measures.begin(), f.measures.begin() + static_cast<long>(n));
  PairMatrix pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i].assign(f.pairs[i].begin(), f.pairs[i].begin() + static_cast<long>(n));
  return {std::move(m), std::move(pairs)};
}

inline const char* kPsiHelp = "approximation function: power:v | recip:c | logref:eps | ubiq:m,n | table:q=v,... | invsqrt:c | const:c";

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> all = [] {
    std::vector<Subcommand> s;

    s.push_back({"measure-1d",
                 "measure of B(q; rho) = {x in T : ||q x|| < rho}",
                 {{"q", "", "positive integer"}, {"rho", "", "radius, rational > 0"}},
                 {"q", "rho", "measure", "measure_decimal", "arcs"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const long q = p.integer("q");
                   const Rational rho = p.rational("rho");
                   if (rho.sign() <= 0) throw UsageError("--rho must be positive");
                   const auto set = build_B_1d(static_cast<std::uint64_t>(q), rho);
                   out.put("q", q);
                   out.put("rho", rho.to_string());
                   out.put_rational("measure", set.measure());
                   out.put("arcs", set.arcs().size());
                 }});

    s.push_back({"area-2d",
                 "area of the strip family B(q; rho) = {u in T^2 : ||q.u|| < rho}",
                 {{"q", "", "integer vector a,b (not 0,0)"}, {"rho", "", "radius, rational > 0"}},
                 {"q", "rho", "area", "area_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const LatticeVector q = p.vector("q");
                   const Rational rho = p.rational("rho");
                   const Rational area = area_2d(RegionExpr::leaf(build_strips_2d(q, rho)));
                   out.put("q", detail::vector_string(q));
                   out.put("rho", rho.to_string());
                   out.put_rational("area", area);
                 }});

    s.push_back({"intersect-2d",
                 "area of B(q; rho) cap B(q'; rho') against the product 4 rho rho'",
                 {{"q", "", "integer vector a,b"},
                  {"qprime", "", "integer vector a,b"},
                  {"rho", "", "radius for q"},
                  {"rhoprime", "", "radius for q'"}},
                 {"q", "qprime", "rho", "rhoprime", "area", "area_decimal", "product", "product_decimal",
                  "linearly_independent", "independent"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const LatticeVector q = p.vector("q"), qp = p.vector("qprime");
                   const Rational rho = p.rational("rho"), rhop = p.rational("rhoprime");
                   const auto a = RegionExpr::leaf(build_strips_2d(q, rho));
                   const auto b = RegionExpr::leaf(build_strips_2d(qp, rhop));
                   const Rational area = area_2d(a & b);
                   const Rational product = area_2d(a) * area_2d(b);
                   const long det = q.components[0] * qp.components[1] - q.components[1] * qp.components[0];
                   out.put("q", detail::vector_string(q));
                   out.put("qprime", detail::vector_string(qp));
                   out.put("rho", rho.to_string());
                   out.put("rhoprime", rhop.to_string());
                   out.put_rational("area", area);
                   out.put_rational("product", product);
                   out.put("linearly_independent", det != 0);
                   out.put("independent", area == product);
                 }});

    s.push_back({"shells",
                 "number of primitive q in Z^m with sup-norm k, one per pair +-q",
                 {{"m", "2", "dimension >= 2"}, {"k", "", "shell radius >= 1"}},
                 {"m", "k", "cardinality", "totient", "ratio", "ratio_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const long m = p.integer("m", 2);
                   const long k = p.integer("k");
                   if (m > 64) throw UsageError("--m must be <= 64");
                   const std::uint64_t card = shell_cardinality(static_cast<int>(m), k);
                   const std::uint64_t phi = totient(static_cast<std::uint64_t>(k));
                   out.put("m", m);
                   out.put("k", k);
                   out.put("cardinality", card);
                   out.put("totient", phi);
                   out.put_rational("ratio", Rational(BigInt(static_cast<unsigned long>(card)), BigInt(static_cast<unsigned long>(phi))));
                 }});

    s.push_back({"totient-sum",
                 "Phi(N) = sum_{k<=N} phi(k) against 3 N^2 / pi^2",
                 {{"n", "", "N >= 2, at most 4294967295"}},
                 {"n", "phi_sum", "main_term_lower", "main_term_lower_decimal", "main_term_upper",
                  "main_term_upper_decimal", "normalized_error_upper", "normalized_error_upper_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const long n = p.integer("n", 2);
                   if (n > 4294967295L) throw UsageError("--n must fit in 32 bits");
                   const std::uint64_t phi = totient_sum(static_cast<std::uint32_t>(n));
                   const Bounds pi2 = directed::pi_squared(directed::kDimensionPrecision);
                   const Rational three_n2 = Rational(3) * Rational(n) * Rational(n);
                   const Bounds main{three_n2 / pi2.upper, three_n2 / pi2.lower};
                   const Rational phi_r(BigInt(static_cast<unsigned long>(phi)));
                   const Rational err = std::max(abs(phi_r - main.lower), abs(phi_r - main.upper));
                   const Rational log_n = directed::log(Rational(n), directed::kDimensionPrecision).lower;
                   out.put("n", n);
                   out.put("phi_sum", phi);
                   out.put_bounds("main_term", main);
                   out.put_rational("normalized_error_upper", err / (Rational(n) * log_n));
                   out.set_rounding("directed", "pi^2 and log N enclosed at 96 bits; normalized_error_upper is an upper bound");
                 }});

    s.push_back({"dirichlet",
                 "last continued-fraction convergent p/q of alpha with q <= N",
                 {{"alpha", "", "rational in [0, 1]"}, {"n", "", "N >= 1"}},
                 {"alpha", "n", "p", "q", "error", "error_decimal", "bound", "bound_decimal", "satisfied"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const Rational alpha = p.rational("alpha");
                   const long n = p.integer("n");
                   const auto d = dirichlet_approx(alpha, static_cast<std::uint64_t>(n));
                   out.put("alpha", alpha.to_string());
                   out.put("n", n);
                   out.put("p", d.p.get_str());
                   out.put("q", d.q.get_str());
                   out.put_rational("error", d.error);
                   out.put_rational("bound", d.bound);
                   out.put("satisfied", d.satisfied());
                 }});

    s.push_back({"count",
                 "number of q <= N with ||q alpha|| < psi(q), and 2 sum psi(q)",
                 {{"alpha", "", "rational"}, {"psi", "", detail::kPsiHelp}, {"n", "", "N >= 1"}},
                 {"alpha", "psi", "n", "count", "undecided", "asymptote_lower", "asymptote_lower_decimal",
                  "asymptote_upper", "asymptote_upper_decimal", "ratio_lower_decimal", "ratio_upper_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const Rational alpha = p.rational("alpha");
                   const long n = p.integer("n");
                   const auto psi = p.psi("psi", static_cast<std::uint64_t>(n));
                   const auto res = count_solutions(alpha, psi, static_cast<std::uint64_t>(n));
                   out.put("alpha", alpha.to_string());
                   out.put("psi", p.text("psi"));
                   out.put("n", n);
                   out.put("count", res.count);
                   out.put("undecided", res.undecided);
                   out.put_bounds("asymptote", res.asymptote);
                   const Rational c(BigInt(static_cast<unsigned long>(res.count)));
                   const Rational c_hi(BigInt(static_cast<unsigned long>(res.count + res.undecided)));
                   out.put("ratio_lower_decimal", res.asymptote.upper.is_zero() ? "inf" : (c / res.asymptote.upper).to_decimal());
                   out.put("ratio_upper_decimal", res.asymptote.lower.is_zero() ? "inf" : (c_hi / res.asymptote.lower).to_decimal());
                   if (!res.asymptote.exact())
                     out.set_rounding("directed", "psi enclosed with directed rounding; asymptote is [lower, upper]; "
                                                  "q with ||q alpha|| inside the psi enclosure are counted as undecided");
                 }});

    s.push_back({"union-growth",
                 "measure of union_{q<=N} B(q; psi(q)) along a ladder of N",
                 {{"psi", "", detail::kPsiHelp}, {"ladder", "1,2,5,25,100,400", "strictly increasing N values"}},
                 {"N", "measure", "measure_decimal", "exact"},
                 true,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const auto ladder = p.ladder("ladder");
                   const auto psi = p.psi("psi", ladder.back());
                   const auto series = khintchine_union_series(psi, ladder);
                   out.put("psi", p.text("psi"));
                   out.put("ladder", p.text("ladder"));
                   out.put_rational("final_measure", series.back().measure);
                   bool exact = true;
                   out.start_series("N", "measure_decimal");
                   for (const auto& u : series) {
                     exact = exact && u.exact;
                     out.add_point({{"N", u.n}, {"measure", u.measure.to_string()},
                                    {"measure_decimal", u.measure.to_decimal()}, {"exact", u.exact}});
                   }
                   if (const auto* pw = std::get_if<ApproximationFunction::Power>(&psi.kind());
                       pw && pw->v > Rational(1)) {
                     const auto tail = power_tail_bound(pw->v, ladder.back());
                     out.put_bounds("tail", tail.tail);
                     out.put_bounds("tail_integral_bound", tail.integral_bound);
                   }
                   if (!exact) out.set_rounding("directed", "psi rounded down; measures are lower bounds");
                 }});

    const std::vector<ParamSpec> family_params{
        {"family", "dyadic", "dyadic (j-th binary digit 0) | b1d (B(q; psi(q)), q = 1..n) | random (seeded arcs)"},
        {"n", "", "family size"},
        {"psi", "", "psi for the b1d family", true}};

    auto bc_params = family_params;
    bc_params.push_back({"ladder", "", "prefix sizes to report (default: n)", true});
    s.push_back({"bc-bound",
                 "(sum |E_k|)^2 / sum_{k,l} |E_k cap E_l| over prefixes of a family",
                 bc_params,
                 {"n", "bound", "bound_decimal"},
                 true,
                 [](const Params& p, std::uint64_t seed, ReportBuilder& out) {
                   const long n = p.integer("n");
                   const auto ladder = p.has("ladder") ? p.ladder("ladder")
                                                       : std::vector<std::uint64_t>{static_cast<std::uint64_t>(n)};
                   if (ladder.back() > static_cast<std::uint64_t>(n)) throw UsageError("--ladder entries must be <= n");
                   const auto family = detail::make_family(p, seed);
                   out.put("family", p.text("family"));
                   out.put("construction", family.construction);
                   out.put("n", n);
                   out.start_series("n", "bound_decimal");
                   Rational last;
                   for (std::uint64_t k : ladder) {
                     const auto [m, pairs] = detail::prefix(family, k);
                     last = bc_lower_bound(m, pairs);
                     out.add_point({{"n", k}, {"bound", last.to_string()}, {"bound_decimal", last.to_decimal()}});
                   }
                   out.put_rational("bound", last);
                 }});

    s.push_back({"quasi-const",
                 "max over pairs k != l of |E_k cap E_l| / (|E_k| |E_l|)",
                 family_params,
                 {"family", "construction", "n", "constant", "constant_decimal"},
                 false,
                 [](const Params& p, std::uint64_t seed, ReportBuilder& out) {
                   const auto family = detail::make_family(p, seed);
                   out.put("family", p.text("family"));
                   out.put("construction", family.construction);
                   out.put("n", p.integer("n"));
                   out.put_rational("constant", quasi_independence_constant(family.measures, family.pairs));
                 }});

    s.push_back({"ubiquity",
                 "uncovered measure of T (line) or T^2 (plane) outside the rho~(N)-neighbourhoods of R_q, 1 <= |q| <= N",
                 {{"case", "line", "line | plane"},
                  {"rho", "", "rho~ spec (default ubiq:1,1 for line, ubiq:2,1 for plane)", true},
                  {"ladder", "", "N values (default 10,100,1000 for line, 2,4,8 for plane)", true}},
                 {"N", "radius", "radius_decimal", "defect", "defect_decimal", "exact"},
                 true,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const std::string& which = p.text("case");
                   if (which != "line" && which != "plane") throw UsageError("--case must be line or plane");
                   const bool line = which == "line";
                   const std::string rho_text = p.has("rho") ? p.text("rho") : (line ? "ubiq:1,1" : "ubiq:2,1");
                   const auto ladder = p.has("ladder") ? p.ladder("ladder")
                                                       : (line ? std::vector<std::uint64_t>{10, 100, 1000}
                                                               : std::vector<std::uint64_t>{2, 4, 8});
                   const auto rho = detail::parse_psi("rho", rho_text, ladder.back());
                   out.put("case", which);
                   out.put("rho", rho_text);
                   out.start_series("N", "defect_decimal");
                   bool exact = true;
                   for (std::uint64_t n : ladder) {
                     const auto d = ubiquity_defect(line ? UbiquityCase::line : UbiquityCase::plane, n, rho);
                     exact = exact && d.exact;
                     out.add_point({{"N", n}, {"radius", d.radius.to_string()}, {"radius_decimal", d.radius.to_decimal()},
                                    {"defect", d.defect.to_string()}, {"defect_decimal", d.defect.to_decimal()},
                                    {"exact", d.exact}});
                   }
                   if (!exact)
                     out.set_rounding("directed", "rho~ rounded down; each defect is an upper bound on the true defect");
                 }});

    s.push_back({"svolume",
                 "s-volume sum_{q=Q0}^{Q1} (q+1) (2 q^{-v-1})^s of the natural cover",
                 {{"v", "", "rational > 0"}, {"s", "", "rational > 0"}, {"q0", "1", "Q0 >= 1"}, {"q1", "", "Q1 >= Q0"}},
                 {"v", "s", "q0", "q1", "volume_lower", "volume_lower_decimal", "volume_upper", "volume_upper_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const CoverSpec c{p.rational("v"), static_cast<std::uint64_t>(p.integer("q0")),
                                     static_cast<std::uint64_t>(p.integer("q1"))};
                   const Rational s = p.rational("s");
                   const Bounds vol = s_volume(c, s);
                   out.put("v", c.v.to_string());
                   out.put("s", s.to_string());
                   out.put("q0", c.q0);
                   out.put("q1", c.q1);
                   out.put_bounds("volume", vol);
                   if (!vol.exact()) out.set_rounding("directed", "irrational powers enclosed at 96 bits");
                 }});

    s.push_back({"critical-s",
                 "s where the dyadic-block s-volumes stop growing (estimates 2/(v+1))",
                 {{"v", "", "rational >= 1"}, {"qmax", "16384", "largest q, >= 256"}},
                 {"j", "log2_volume"},
                 true,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const Rational v = p.rational("v");
                   const auto est = critical_exponent_estimate(v, static_cast<std::uint64_t>(p.integer("qmax", 256)));
                   out.put("v", v.to_string());
                   out.put("qmax", p.integer("qmax", 256));
                   out.put("estimate", detail::format_double(est.estimate));
                   out.put_rational("s_low", est.s_low);
                   out.put_rational("s_high", est.s_high);
                   out.put("iterations", est.iterations);
                   out.put_rational("formula", Rational(2) / (v + Rational(1)));
                   out.start_series("j", "log2_volume");
                   for (const auto& b : est.blocks) out.add_point({{"j", b.j}, {"log2_volume", detail::format_double(b.log2_volume)}});
                   out.set_rounding("directed", "block volumes enclosed at 96 bits; regression in double precision");
                 }});

    s.push_back({"boxcount",
                 "box-counting slope of the dyadic shells E_Q at delta = Q^{-(v+1)}",
                 {{"v", "", "integer > 1"}, {"ladder", "64,128,256,512,1024,2048,4096", "powers of 2, at least 4"}},
                 {"Q", "log2_inv_delta", "log2_boxes", "boxes"},
                 true,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const Rational v = p.rational("v");
                   const auto est = box_counting_estimate(v, p.ladder("ladder"));
                   out.put("v", v.to_string());
                   out.put("ladder", p.text("ladder"));
                   out.put("slope", detail::format_double(est.slope));
                   out.put_rational("formula", Rational(2) / (v + Rational(1)));
                   out.start_series("log2_inv_delta", "log2_boxes");
                   for (const auto& pt : est.points)
                     out.add_point({{"Q", pt.q}, {"log2_inv_delta", pt.delta_bits},
                                    {"log2_boxes", detail::format_double(std::log2(static_cast<double>(pt.boxes)))},
                                    {"boxes", pt.boxes}});
                 }});

    s.push_back({"formulas",
                 "dim W_v = (m-1)n + (m+n)/(v+1) (v > m/n) or mn, and gamma = min{1, (1+m/n)/(1+v)}",
                 {{"m", "", "m >= 1"}, {"n", "", "n >= 1"}, {"v", "", "rational > 0"}},
                 {"m", "n", "v", "jb_dimension", "jb_dimension_decimal", "gamma", "gamma_decimal", "lower_bound",
                  "lower_bound_decimal"},
                 false,
                 [](const Params& p, std::uint64_t, ReportBuilder& out) {
                   const long m = p.integer("m"), n = p.integer("n");
                   if (m > 1000000 || n > 1000000) throw UsageError("--m and --n must be <= 1000000");
                   const Rational v = p.rational("v");
                   const auto g = gamma_exponent(static_cast<int>(m), static_cast<int>(n), v);
                   out.put("m", m);
                   out.put("n", n);
                   out.put("v", v.to_string());
                   out.put_rational("jb_dimension", jb_dimension(static_cast<int>(m), static_cast<int>(n), v));
                   out.put_rational("gamma", g.gamma);
                   out.put_rational("lower_bound", g.lower_bound);
                 }});
    return s;
  }();
  return all;
}

inline const Subcommand& find_subcommand(const std::string& name) {
  for (const auto& s : subcommands())
    if (s.name == name) return s;
  throw UsageError("unknown subcommand '" + name + "'");
}

/// Executes one run. The report embeds the resolved parameters, the seed
/// and the format; it carries no timing so equal configs give equal bytes.
inline ExperimentReport run(const RunConfig& config) {
  const Subcommand& sub = find_subcommand(config.subcommand);
  std::map<std::string, std::string> resolved;
  for (const auto& spec : sub.params) {
    const auto it = config.params.find(spec.name);
    if (it != config.params.end() && !it->second.empty())
      resolved[spec.name] = it->second;
    else if (!spec.default_value.empty())
      resolved[spec.name] = spec.default_value;
    else if (!spec.optional)
      throw UsageError("missing required option --" + spec.name);
  }
  for (const auto& [key, value] : config.params) {
    bool known = false;
    for (const auto& spec : sub.params) known = known || spec.name == key;
    if (!known) throw UsageError("unknown option --" + key + " for " + sub.name);
  }

  ReportBuilder builder;
  try {
    sub.run(Params(resolved), config.seed, builder);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }

  ExperimentReport report;
  Json& doc = report.doc;
  doc["tool"] = "diophlab";
  doc["experiment"] = sub.name;
  Json cfg = Json::object();
  Json params = Json::object();
  for (const auto& [k, v] : resolved) params[k] = v;
  cfg["params"] = std::move(params);
  cfg["seed"] = config.seed;
  cfg["format"] = format_name(config.format);
  doc["config"] = std::move(cfg);
  doc["results"] = builder.results();
  if (!builder.series().is_null()) doc["series"] = builder.series();
  doc["rounding"] = builder.rounding();
  return report;
}

// ---------------------------------------------------------------------------
// Emitters

namespace detail {
inline std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  return line + "\r\n";
}
}  // namespace detail

/// RFC 4180 CSV: series subcommands give one row per ladder point, the
/// others one row of results. Columns are listed in `--help`.
inline std::string emit_csv(const ExperimentReport& report) {
  const Json& doc = report.doc;
  const Subcommand& sub = find_subcommand(doc["experiment"].get<std::string>());
  std::vector<std::string> header;
  for (const auto& c : sub.csv_columns) header.push_back(detail::csv_cell(c));
  std::string out = detail::csv_row(header);
  auto row_from = [&](const Json& obj) {
    std::vector<std::string> cells;
    for (const auto& c : sub.csv_columns) cells.push_back(obj.contains(c) ? detail::csv_cell(obj[c]) : "");
    out += detail::csv_row(cells);
  };
  if (sub.series) {
    if (doc.contains("series"))
      for (const auto& pt : doc["series"]["points"]) row_from(pt);
  } else {
    row_from(doc["results"]);
  }
  return out;
}

/// Two columns "x y" per ladder point under a '#' header.
inline std::string emit_plotdata(const ExperimentReport& report) {
  if (!report.has_series())
    throw UsageError("plotdata needs a report with series data (union-growth, ubiquity, boxcount, critical-s, bc-bound)");
  const Json& doc = report.doc;
  const Json& series = doc["series"];
  std::string out = "# diophlab " + doc["experiment"].get<std::string>();
  for (const auto& [k, v] : doc["config"]["params"].items()) out += " " + k + "=" + v.get<std::string>();
  out += " seed=" + std::to_string(doc["config"]["seed"].get<std::uint64_t>()) + "\n";
  const std::string x = series["x"].get<std::string>(), y = series["y"].get<std::string>();
  out += "# x: " + x + ", y: " + y + "\n";
  auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& pt : series["points"]) out += text(pt[x]) + " " + text(pt[y]) + "\n";
  return out;
}

inline std::string emit(const ExperimentReport& report, Format format) {
  switch (format) {
    case Format::csv: return emit_csv(report);
    case Format::plotdata: return emit_plotdata(report);
    case Format::json: break;
  }
  return report.to_json();
}

/// `--help` footer text listing the CSV columns of a subcommand.
inline std::string csv_help(const Subcommand& sub) {
  std::string s = "CSV columns (" + std::string(sub.series ? "one row per ladder point" : "one row") + "): ";
  for (std::size_t i = 0; i < sub.csv_columns.size(); ++i) s += (i ? "," : "") + sub.csv_columns[i];
  return s;
}

}  // namespace diophlab::cli
