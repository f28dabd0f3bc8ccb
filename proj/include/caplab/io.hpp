#ifndef CAPLAB_IO_HPP
#define CAPLAB_IO_HPP

// JSON and CSV exchange formats. Complex numbers are [re, im] pairs.
//
// Set files:
//   {"kind": "disk",     "center": [x, y], "radius": r}
//   {"kind": "segment",  "a": [x, y], "b": [x, y]}
//   {"kind": "polyline", "points": [[x, y], ...], "closed": false}
//   {"kind": "arcs",     "arcs": [[t0, t1], ...], "center": [0, 0], "radius": 1}
//   {"kind": "union",    "members": [<set>, ...]}
//   {"kind": "julia",    "c": [x, y]}
//   {"kind": "cloud",    "points": [[x, y], ...]}
// plus an optional "meta" object whose keys are the SetMeta flag names and
// whose values are booleans or {"value": bool, "provenance": "..."}.
//
// Measure files: [{"z": [x, y], "w": weight}, ...] or
//   {"atoms": [...same...], "resolution": rho}.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "core.hpp"
#include "measures.hpp"
#include "motion.hpp"
#include "sets.hpp"

namespace caplab::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// complex numbers

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(where + ": expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

/// Parses text, turning syntax errors into InputError with line and column.
inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset → line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                     e.what() + ")");
  }
}

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& path) { return parse_text(read_text(path), path); }

// ---------------------------------------------------------------------------
// sets

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

struct MetaKey {
  const char* name;
  std::optional<sets::Flag> sets::SetMeta::*slot;
};

inline constexpr MetaKey kMetaKeys[] = {
    {"is_connected", &sets::SetMeta::is_connected},
    {"is_quasicircle", &sets::SetMeta::is_quasicircle},
    {"has_sigma_finite_length", &sets::SetMeta::has_sigma_finite_length},
    {"is_analytic_boundary", &sets::SetMeta::is_analytic_boundary},
    {"tangent_free_certificate", &sets::SetMeta::tangent_free_certificate},
    {"is_jordan_arc", &sets::SetMeta::is_jordan_arc},
};

inline sets::SetMeta meta_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": meta must be an object");
  sets::SetMeta m;
  for (const auto& [key, val] : j.items()) {
    const MetaKey* hit = nullptr;
    for (const auto& k : kMetaKeys)
      if (key == k.name) hit = &k;
    if (!hit) throw InputError(where + ": unknown meta flag \"" + key + "\"");
    sets::Flag f;
    if (val.is_boolean()) {
      f = {val.get<bool>(), "user"};
    } else if (val.is_object() && val.contains("value") && val["value"].is_boolean()) {
      f.value = val["value"].get<bool>();
      f.provenance = val.contains("provenance") && val["provenance"].is_string() ? val["provenance"].get<std::string>() : "user";
    } else {
      throw InputError(where + ": meta flag \"" + key + "\" must be a boolean");
    }
    m.*(hit->slot) = f;
  }
  return m;
}

}  // namespace detail

inline sets::SetSpec set_from_json(const json& j, const std::string& where = "set") {
  using detail::field;
  if (!j.is_object()) throw InputError(where + ": a set must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError(where + ": missing string field \"kind\"");
  const auto kind = j["kind"].get<std::string>();
  sets::SetMeta meta = j.contains("meta") ? detail::meta_from(j["meta"], where + ".meta") : sets::SetMeta{};
  sets::Shape shape;
  if (kind == "disk") {
    shape = sets::Disk{complex_from(field(j, "center", where), where + ".center"),
                       detail::number(field(j, "radius", where), where + ".radius")};
  } else if (kind == "segment") {
    shape = sets::Segment{complex_from(field(j, "a", where), where + ".a"), complex_from(field(j, "b", where), where + ".b")};
  } else if (kind == "polyline") {
    if (j.contains("closed") && !j["closed"].is_boolean()) throw InputError(where + ".closed: expected a boolean");
    const bool closed = j.contains("closed") && j["closed"].get<bool>();
    shape = sets::Polyline{complex_list(field(j, "points", where), where + ".points"), closed};
  } else if (kind == "arcs") {
    sets::CircleArcs a;
    const auto& arr = field(j, "arcs", where);
    if (!arr.is_array()) throw InputError(where + ".arcs: expected an array of [t0, t1]");
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 2) throw InputError(where + ".arcs: each arc is [t0, t1]");
      a.arcs.emplace_back(detail::number(p[0], where + ".arcs"), detail::number(p[1], where + ".arcs"));
    }
    if (j.contains("center")) a.center = complex_from(j["center"], where + ".center");
    if (j.contains("radius")) a.radius = detail::number(j["radius"], where + ".radius");
    shape = a;
  } else if (kind == "union") {
    const auto& arr = field(j, "members", where);
    if (!arr.is_array()) throw InputError(where + ".members: expected an array");
    sets::Union u;
    for (std::size_t i = 0; i < arr.size(); ++i)
      u.members.push_back(set_from_json(arr[i], where + ".members[" + std::to_string(i) + "]"));
    shape = u;
  } else if (kind == "julia") {
    shape = sets::Julia{complex_from(field(j, "c", where), where + ".c")};
  } else if (kind == "cloud") {
    shape = sets::PointCloud{complex_list(field(j, "points", where), where + ".points")};
  } else {
    throw InputError(where + ": unknown kind \"" + kind + "\" (expected disk, segment, polyline, arcs, union, julia or cloud)");
  }
  try {
    return sets::make(std::move(shape), std::move(meta));
  } catch (const json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline json to_json(const sets::SetSpec& s) {
  json j;
  j["kind"] = sets::kind_name(s);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, sets::Disk>) {
          j["center"] = to_json(x.center);
          j["radius"] = x.radius;
        } else if constexpr (std::is_same_v<T, sets::Segment>) {
          j["a"] = to_json(x.a);
          j["b"] = to_json(x.b);
        } else if constexpr (std::is_same_v<T, sets::Polyline>) {
          j["points"] = json::array();
          for (auto z : x.points) j["points"].push_back(to_json(z));
          j["closed"] = x.closed;
        } else if constexpr (std::is_same_v<T, sets::CircleArcs>) {
          j["arcs"] = json::array();
          for (auto [a, b] : x.arcs) j["arcs"].push_back({a, b});
          j["center"] = to_json(x.center);
          j["radius"] = x.radius;
        } else if constexpr (std::is_same_v<T, sets::Union>) {
          j["members"] = json::array();
          for (const auto& m : x.members) j["members"].push_back(to_json(m));
        } else if constexpr (std::is_same_v<T, sets::Julia>) {
          j["c"] = to_json(x.c);
        } else {
          j["points"] = json::array();
          for (auto z : x.points) j["points"].push_back(to_json(z));
        }
      },
      s.shape);
  json meta = json::object();
  for (const auto& k : detail::kMetaKeys)
    if (const auto& f = s.meta.*(k.slot)) meta[k.name] = {{"value", f->value}, {"provenance", f->provenance}};
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

inline sets::SetSpec load_set(const std::string& path) { return set_from_json(load_json(path), path); }

// ---------------------------------------------------------------------------
// measures

inline measures::DiscreteMeasure measure_from_json(const json& j, const std::string& where = "measure") {
  const json* atoms = &j;
  double resolution = 0.0;
  if (j.is_object()) {
    atoms = &detail::field(j, "atoms", where);
    if (j.contains("resolution")) resolution = detail::number(j["resolution"], where + ".resolution");
  }
  if (!atoms->is_array()) throw InputError(where + ": expected an array of {\"z\": [re, im], \"w\": weight}");
  std::vector<cplx> z;
  std::vector<double> w;
  for (std::size_t i = 0; i < atoms->size(); ++i) {
    const auto& a = (*atoms)[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!a.is_object()) throw InputError(at + ": expected {\"z\": [re, im], \"w\": weight}");
    z.push_back(complex_from(detail::field(a, "z", at), at + ".z"));
    w.push_back(detail::number(detail::field(a, "w", at), at + ".w"));
  }
  return measures::DiscreteMeasure(std::move(z), std::move(w), resolution);
}

inline json to_json(const measures::DiscreteMeasure& m) {
  json atoms = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) atoms.push_back({{"z", to_json(m.atoms()[i])}, {"w", m.weights()[i]}});
  if (m.resolution() == 0.0) return atoms;
  return {{"atoms", atoms}, {"resolution", m.resolution()}};
}

inline measures::DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(load_json(path), path);
}

// ---------------------------------------------------------------------------
// reports

inline json to_json(const capacity::CapacityEstimate& e) {
  json j;
  j["value"] = e.value;
  j["kind"] = capacity::kind_name(e.kind);
  if (e.upper) j["upper"] = *e.upper;
  j["method"] = e.method;
  j["rule"] = e.rule;
  j["params"] = e.params;
  j["certificate"] = e.certificate;
  return j;
}

inline json to_json(const capacity::ClassificationReport& r) {
  json j;
  j["curve_type"] = r.curve_type;
  j["quasicircle"] = r.quasicircle;
  j["conditions"] = json::array();
  for (std::size_t i = 0; i < r.conditions.size(); ++i)
    j["conditions"].push_back(json{{"index", i + 1},
                               {"name", r.conditions[i].name},
                               {"verdict", capacity::verdict_name(r.conditions[i].verdict)},
                               {"evidence", r.conditions[i].evidence}});
  j["relationship"] = r.relationship;
  j["gamma_extremal_exists"] = r.gamma_extremal_exists;
  j["alpha_extremal_exists"] = r.alpha_extremal_exists ? json(*r.alpha_extremal_exists) : json("undetermined");
  j["extremal_note"] = r.extremal_note;
  return j;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip text for a double; deterministic across runs.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << csv_field(cells[i]);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

inline std::string scan_csv(const std::vector<motion::ScanRow>& rows) {
  CsvWriter w({"lambda_re", "lambda_im", "observable", "value", "kind", "notes"});
  for (const auto& r : rows)
    w.row({fmt(r.lambda.real()), fmt(r.lambda.imag()), r.observable, r.value ? fmt(*r.value) : "", r.kind, r.notes});
  return w.str();
}

}  // namespace caplab::io

#endif  // CAPLAB_IO_HPP
