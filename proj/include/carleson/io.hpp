#pragma once

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "carleson/calculus/green.hpp"
#include "carleson/calculus/polynomial.hpp"
#include "carleson/calculus/uchiyama.hpp"
#include "carleson/error.hpp"
#include "carleson/extremal.hpp"
#include "carleson/geometry.hpp"
#include "carleson/interpolation.hpp"
#include "carleson/measure.hpp"

namespace carleson::io {

using nlohmann::json;

/// Parses JSON text; syntax errors become InputError with line and column.
inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": JSON syntax error: " << e.what();
    throw InputError(msg.str());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  return v.get<int>();
}

inline SpacePoint point(const json& v, int n, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of reals");
  if (v.size() != 2 * static_cast<std::size_t>(n)) {
    std::ostringstream msg;
    msg << "expected " << 2 * n << " reals (re, im per coordinate), got " << v.size();
    schema_error(where, msg.str());
  }
  std::array<cplx, kMaxDim> z{};
  for (int i = 0; i < n; ++i)
    z[i] = cplx(number(v[2 * i], where + "[" + std::to_string(2 * i) + "]"),
                number(v[2 * i + 1], where + "[" + std::to_string(2 * i + 1) + "]"));
  try {
    return SpacePoint(std::span<const cplx>(z.data(), static_cast<std::size_t>(n)));
  } catch (const InputError& e) {
    schema_error(where, e.what());
  }
}

inline json point_json(const SpacePoint& p) {
  json a = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    a.push_back(p[i].real());
    a.push_back(p[i].imag());
  }
  return a;
}

}  // namespace detail

inline Space space_from_json(const json& v, const std::string& where = "space") {
  const json& kind = detail::member(v, "kind", where);
  if (!kind.is_string()) detail::schema_error(where + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "disc") return Space::disc();
  if (k == "ball") {
    const int n = detail::integer(detail::member(v, "dim", where), where + ".dim");
    if (n < 1 || static_cast<std::size_t>(n) > kMaxDim)
      detail::schema_error(where + ".dim", "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    return Space::ball(n);
  }
  detail::schema_error(where + ".kind", "unknown kind \"" + k + "\" (expected \"disc\" or \"ball\")");
}

inline json to_json(const Space& s) {
  if (s.is_disc()) return {{"kind", "disc"}};
  return {{"kind", "ball"}, {"dim", s.dim()}};
}

/// {"space": {...}, "atoms": [{"point": [re, im, ...], "weight": w}, ...]}
inline DiscreteMeasure measure_from_json(const json& doc) {
  const Space s = space_from_json(detail::member(doc, "space", "measure"));
  const json& atoms = detail::member(doc, "atoms", "measure");
  if (!atoms.is_array() || atoms.empty()) detail::schema_error("atoms", "expected a non-empty array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "atoms[" + std::to_string(i) + "]";
    const SpacePoint p = detail::point(detail::member(atoms[i], "point", where), s.dim(), where + ".point");
    const double w = detail::number(detail::member(atoms[i], "weight", where), where + ".weight");
    if (!(w > 0.0)) detail::schema_error(where + ".weight", "weight must be positive");
    out.push_back({p, w});
  }
  return {s, std::move(out)};
}

inline json to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"point", detail::point_json(a.point)}, {"weight", a.weight}});
  return {{"space", to_json(mu.space())}, {"atoms", atoms}};
}

/// {"space": {"kind": "disc"}, "points": [[re, im], ...]}; an "atoms" array of
/// {"point": [...]} objects is accepted in place of "points".
inline PointSequence sequence_from_json(const json& doc) {
  const Space s = space_from_json(detail::member(doc, "space", "sequence"));
  if (!s.is_disc()) detail::schema_error("space", "point sequences are supported on the disc only");
  std::vector<SpacePoint> pts;
  if (doc.contains("points")) {
    const json& arr = doc["points"];
    if (!arr.is_array() || arr.empty()) detail::schema_error("points", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      pts.push_back(detail::point(arr[i], 1, "points[" + std::to_string(i) + "]"));
  } else {
    const json& arr = detail::member(doc, "atoms", "sequence");
    if (!arr.is_array() || arr.empty()) detail::schema_error("atoms", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "atoms[" + std::to_string(i) + "]";
      pts.push_back(detail::point(detail::member(arr[i], "point", where), 1, where + ".point"));
    }
  }
  return PointSequence(std::move(pts));
}

inline json to_json(const PointSequence& seq) {
  json pts = json::array();
  for (const auto& p : seq.points()) pts.push_back(detail::point_json(p));
  return {{"space", to_json(seq.space())}, {"points", pts}};
}

/// {"dim": n, "terms": [{"alpha": [..], "re": .., "im": ..}, ...]}
inline MultiPoly poly_from_json(const json& doc) {
  const int n = detail::integer(detail::member(doc, "dim", "polynomial"), "dim");
  if (n < 1 || static_cast<std::size_t>(n) > kMaxDim)
    detail::schema_error("dim", "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  MultiPoly f(n);
  const json& terms = detail::member(doc, "terms", "polynomial");
  if (!terms.is_array()) detail::schema_error("terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "terms[" + std::to_string(i) + "]";
    const json& alpha = detail::member(terms[i], "alpha", where);
    if (!alpha.is_array()) detail::schema_error(where + ".alpha", "expected an array of integers");
    std::vector<int> a;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      a.push_back(detail::integer(alpha[k], where + ".alpha[" + std::to_string(k) + "]"));
    const double re = detail::number(detail::member(terms[i], "re", where), where + ".re");
    const double im = terms[i].contains("im") ? detail::number(terms[i]["im"], where + ".im") : 0.0;
    try {
      f.add_term(std::span<const int>(a), cplx(re, im));
    } catch (const InputError& e) {
      detail::schema_error(where, e.what());
    }
  }
  return f;
}

inline json to_json(const MultiPoly& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json alpha = json::array();
    for (int i = 0; i < f.dim(); ++i) alpha.push_back(t.alpha[i]);
    terms.push_back({{"alpha", alpha}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
  }
  return {{"dim", f.dim()}, {"terms", terms}};
}

inline DiscreteMeasure load_measure(const std::string& path) { return measure_from_json(parse_json(read_file(path), path)); }
inline PointSequence load_sequence(const std::string& path) { return sequence_from_json(parse_json(read_file(path), path)); }
inline MultiPoly load_poly(const std::string& path) { return poly_from_json(parse_json(read_file(path), path)); }

// Reports. Doubles are written in shortest round-trip form.

inline json to_json(const AnalysisReport& r) {
  json j = {{"space", to_json(r.space)},
            {"atom_count", r.atom_count},
            {"a_sq", r.a_sq},
            {"c_supp", r.c_supp},
            {"c_grid", r.c_grid},
            {"bound", r.bound},
            {"bound_constant", theorem_bound_constant(r.space)},
            {"ratio", r.ratio},
            {"holds", r.holds},
            {"grid_resolution", r.grid_resolution}};
  j["i_box"] = r.i_box ? json(*r.i_box) : json(nullptr);
  return j;
}

inline json to_json(const InterpolationReport& r) {
  return {{"point_count", r.point_count},
          {"delta", r.delta},
          {"k_sq", r.k_sq},
          {"k_sq_bound", r.k_sq_bound},
          {"c_supp", r.c_supp},
          {"gram_cond_root", r.gram_cond_root},
          {"orth_bound", r.orth_bound},
          {"interp_constant", r.interp_constant},
          {"kernel_sup", r.kernel_sup},
          {"kernel_sup_bound", r.kernel_sup_bound},
          {"grid_resolution", r.grid_resolution},
          {"orth_holds", r.orth_holds},
          {"k_sq_holds", r.k_sq_holds},
          {"kernel_sup_holds", r.kernel_sup_holds}};
}

inline json to_json(const SearchResult& r) {
  json j = {{"best_ratio", r.best_ratio}, {"seed", r.seed}, {"iterations_recorded", r.trace.size()}};
  j["best_measure"] = r.best_measure ? to_json(*r.best_measure) : json(nullptr);
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"restart", f.restart}, {"iteration", f.iteration}, {"message", f.message}});
  j["failures"] = failures;
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"restart", v.restart}, {"iteration", v.iteration}, {"ratio", v.ratio}});
  j["violations"] = violations;
  return j;
}

/// %.17g: enough digits to recover every double.
inline std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "space,atom_count,a_sq,c_supp,c_grid,i_box,bound,ratio,holds,grid_resolution\n"
      << r.space.name() << ',' << r.atom_count << ',' << csv_number(r.a_sq) << ',' << csv_number(r.c_supp) << ','
      << csv_number(r.c_grid) << ',' << (r.i_box ? csv_number(*r.i_box) : "") << ',' << csv_number(r.bound) << ','
      << csv_number(r.ratio) << ',' << (r.holds ? "true" : "false") << ',' << r.grid_resolution << '\n';
  return out.str();
}

inline std::string trace_csv(const SearchResult& r) {
  std::ostringstream out;
  out << "iteration,best_ratio\n";
  for (const auto& t : r.trace) out << t.iteration << ',' << csv_number(t.best_ratio) << '\n';
  return out.str();
}

}  // namespace carleson::io
