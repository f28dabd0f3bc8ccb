#ifndef CAPLAB_CAPACITY_HPP
#define CAPLAB_CAPACITY_HPP

// Capacity engines for γ (closed-form rules, Leja points, LP competitors,
// Tolsa potentials), the α rule engine, and the Jordan-curve classification.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "julia.hpp"
#include "lp_engine.hpp"
#include "measures.hpp"
#include "menger.hpp"
#include "sampling.hpp"
#include "sets.hpp"

namespace caplab::capacity {

using json = nlohmann::ordered_json;
using sets::Flag;
using sets::SetMeta;
using sets::SetSpec;

enum class Kind { exact, lower_bound, upper_bound, comparable, interval };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::exact: return "exact";
    case Kind::lower_bound: return "lower_bound";
    case Kind::upper_bound: return "upper_bound";
    case Kind::comparable: return "comparable";
    case Kind::interval: return "interval";
  }
  return "?";
}

/// `rule` names the closed-form or structural rule that produced the value;
/// for kind = interval the value is the lower end and `upper` the upper end.
struct CapacityEstimate {
  double value = 0.0;
  Kind kind = Kind::exact;
  std::string method;
  std::string rule;
  json params = json::object();
  json certificate = json::object();
  std::optional<double> upper;
};

// ---------------------------------------------------------------------------
// Metadata: structural facts merged with user flags

namespace detail {

inline void put(std::optional<Flag>& slot, bool v, const std::string& why) {
  if (!slot) slot = Flag{v, why};
}

inline bool disks_disjoint(const sets::Disk& a, const sets::Disk& b) {
  return std::abs(a.center - b.center) > a.radius + b.radius;
}

inline bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](cplx a, cplx b, cplx z) {
    return cross(b - a, z - a) == 0.0 && std::min(a.real(), b.real()) <= z.real() && z.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= z.imag() && z.imag() <= std::max(a.imag(), b.imag());
  };
  return (d1 == 0 && on(p1, p2, q1)) || (d2 == 0 && on(p1, p2, q2)) || (d3 == 0 && on(q1, q2, p1)) ||
         (d4 == 0 && on(q1, q2, p2));
}

/// Non-adjacent edges must not meet; adjacent edges may only share their
/// common vertex.
inline bool polyline_is_simple(const sets::Polyline& pl) {
  std::vector<cplx> v = pl.points;
  if (pl.closed) v.push_back(v.front());
  const std::size_t m = v.size() - 1;  // edges
  for (std::size_t i = 0; i < m; ++i) {
    if (v[i] == v[i + 1]) return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = j == i + 1 || (pl.closed && i == 0 && j == m - 1);
      if (adjacent) {
        // only the shared vertex may be common: reject folding back
        const cplx shared = j == i + 1 ? v[i + 1] : v[0];
        const cplx a = j == i + 1 ? v[i] : v[1];
        const cplx b = j == i + 1 ? v[j + 1] : v[m - 1];
        if (cross(a - shared, b - shared) == 0.0 && ((a - shared) * std::conj(b - shared)).real() > 0) return false;
        continue;
      }
      if (segments_cross(v[i], v[i + 1], v[j], v[j + 1])) return false;
    }
  }
  return true;
}

inline SetMeta structural_meta(const SetSpec& s) {
  SetMeta m;
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, sets::Disk>) {
          put(m.is_connected, true, "structure: disk");
          put(m.is_analytic_boundary, true, "structure: disk bounded by a circle");
          put(m.has_sigma_finite_length, false, "structure: disk has positive area");
          put(m.is_jordan_arc, false, "structure: disk");
        } else if constexpr (std::is_same_v<T, sets::Segment>) {
          put(m.is_connected, true, "structure: segment");
          put(m.has_sigma_finite_length, true, "structure: segment has finite length");
          put(m.is_jordan_arc, true, "structure: segment");
          put(m.is_quasicircle, false, "structure: an arc is not a closed curve");
          put(m.is_analytic_boundary, false, "structure: segment has empty interior");
          put(m.tangent_free_certificate, false, "structure: segment has a tangent at every point");
        } else if constexpr (std::is_same_v<T, sets::Polyline>) {
          put(m.is_connected, true, "structure: polyline");
          put(m.has_sigma_finite_length, true, "structure: polyline has finite length");
          put(m.is_analytic_boundary, false, "structure: polyline has empty interior");
          put(m.tangent_free_certificate, false, "structure: polyline has tangents off its vertices");
          if (polyline_is_simple(sh)) {
            put(m.is_jordan_arc, !sh.closed, "structure: simple polyline");
            put(m.is_quasicircle, sh.closed, sh.closed ? "structure: simple closed polygon" : "structure: open polyline");
          }
        } else if constexpr (std::is_same_v<T, sets::CircleArcs>) {
          m.has_sigma_finite_length = Flag{true, "structure: circular arcs have finite length"};
          m.is_analytic_boundary = Flag{false, "structure: arcs have empty interior"};
          m.tangent_free_certificate = Flag{false, "structure: circle has a tangent at every point"};
          const int comps = sets::arc_components(sh);
          m.is_connected = Flag{comps == 1, "structure: " + std::to_string(comps) + " arc component(s)"};
          if (sets::is_full_circle(sh)) {
            m.is_quasicircle = Flag{true, "structure: full circle"};
            m.is_jordan_arc = Flag{false, "structure: full circle"};
          } else if (comps == 1) {
            m.is_quasicircle = Flag{false, "structure: an arc is not a closed curve"};
            m.is_jordan_arc = Flag{true, "structure: single circular arc"};
          }
        } else if constexpr (std::is_same_v<T, sets::Julia>) {
          if (sh.c == cplx{}) {
            m.is_connected = Flag{true, "structure: Julia set of z^2 is the unit circle"};
            m.is_quasicircle = Flag{true, "structure: Julia set of z^2 is the unit circle"};
            m.has_sigma_finite_length = Flag{true, "structure: unit circle has finite length"};
            m.tangent_free_certificate = Flag{false, "structure: circle has a tangent at every point"};
            m.is_analytic_boundary = Flag{false, "structure: circle has empty interior"};
            m.is_jordan_arc = Flag{false, "structure: closed curve"};
          } else if (julia::in_main_cardioid(sh.c)) {
            const std::string why = "structure: c in the main cardioid";
            m.is_connected = Flag{true, why};
            m.is_quasicircle = Flag{true, why + " (quasicircle Julia set)"};
            m.tangent_free_certificate = Flag{true, why + " (Fatou: no tangent points for c != 0)"};
            m.has_sigma_finite_length = Flag{false, why + " (non-rectifiable Julia set)"};
            m.is_analytic_boundary = Flag{false, why};
            m.is_jordan_arc = Flag{false, "structure: closed curve"};
          } else if (julia::escape_time(julia::params(sh.c), 0.0)) {
            m.is_connected = Flag{false, "structure: critical orbit escapes (Cantor Julia set)"};
          }
        } else if constexpr (std::is_same_v<T, sets::PointCloud>) {
          // A cloud is either a finite set or, when the user asserts it is
          // connected, a sample of a continuum about which nothing is known.
          const bool sample = s.meta.is_connected && s.meta.is_connected->value;
          if (!sample) {
            m.has_sigma_finite_length = Flag{true, "structure: finite point set"};
            if (sh.points.size() > 1) m.is_connected = Flag{false, "structure: finite point set"};
          }
        } else {  // Union
          const auto& mem = sh.members;
          if (mem.size() == 1) {
            m = structural_meta(mem.front());
            return;
          }
          bool all_disks = true, all_sigma = true, some_not_sigma = false;
          for (const auto& x : mem) {
            all_disks = all_disks && x.template is<sets::Disk>();
            const auto sm = structural_meta(x);
            const auto& f = x.meta.has_sigma_finite_length ? x.meta.has_sigma_finite_length : sm.has_sigma_finite_length;
            all_sigma = all_sigma && f && f->value;
            some_not_sigma = some_not_sigma || (f && !f->value);
          }
          if (all_sigma) m.has_sigma_finite_length = Flag{true, "structure: every member has sigma-finite length"};
          if (some_not_sigma) m.has_sigma_finite_length = Flag{false, "structure: a member has positive area or infinite length"};
          if (all_disks) {
            bool disjoint = true;
            for (std::size_t i = 0; i < mem.size(); ++i)
              for (std::size_t j = i + 1; j < mem.size(); ++j)
                disjoint = disjoint && disks_disjoint(mem[i].template as<sets::Disk>(), mem[j].template as<sets::Disk>());
            if (disjoint) {
              m.is_analytic_boundary = Flag{true, "structure: pairwise disjoint closed disks"};
              m.is_connected = Flag{false, "structure: pairwise disjoint closed disks"};
            }
          }
        }
      },
      s.shape);
  return m;
}

inline void merge_flag(std::optional<Flag>& out, const std::optional<Flag>& user, const std::optional<Flag>& fact,
                       const char* name) {
  if (user && fact && user->value != fact->value)
    throw InputError(std::string("contradictory flags: ") + name + " asserted " + (user->value ? "true" : "false") +
                     " (" + user->provenance + ") but " + fact->provenance + " gives " + (fact->value ? "true" : "false"));
  out = user ? user : fact;
}

inline bool is_true(const std::optional<Flag>& f) { return f && f->value; }
inline bool is_false(const std::optional<Flag>& f) { return f && !f->value; }

}  // namespace detail

/// Effective metadata: user flags plus structural facts of the shape, each
/// with its provenance. Disagreement between the two, or a combination no
/// set can have, is an InputError.
inline SetMeta derive_meta(const SetSpec& s) {
  using detail::is_true;
  const SetMeta fact = detail::structural_meta(s);
  SetMeta m;
  detail::merge_flag(m.is_connected, s.meta.is_connected, fact.is_connected, "is_connected");
  detail::merge_flag(m.is_quasicircle, s.meta.is_quasicircle, fact.is_quasicircle, "is_quasicircle");
  detail::merge_flag(m.has_sigma_finite_length, s.meta.has_sigma_finite_length, fact.has_sigma_finite_length,
                     "has_sigma_finite_length");
  detail::merge_flag(m.is_analytic_boundary, s.meta.is_analytic_boundary, fact.is_analytic_boundary,
                     "is_analytic_boundary");
  detail::merge_flag(m.tangent_free_certificate, s.meta.tangent_free_certificate, fact.tangent_free_certificate,
                     "tangent_free_certificate");
  detail::merge_flag(m.is_jordan_arc, s.meta.is_jordan_arc, fact.is_jordan_arc, "is_jordan_arc");

  if (is_true(m.has_sigma_finite_length) && is_true(m.is_analytic_boundary))
    throw InputError("contradictory flags: sets with analytic boundary have interior, so their length is not sigma-finite");
  if (is_true(m.has_sigma_finite_length) && is_true(m.tangent_free_certificate) &&
      (is_true(m.is_quasicircle) || is_true(m.is_jordan_arc)))
    throw InputError("contradictory flags: a curve of sigma-finite length has tangent points on a set of positive length");
  if (is_true(m.is_quasicircle) && is_true(m.is_jordan_arc))
    throw InputError("contradictory flags: a quasicircle is a closed curve, not an arc");
  if (detail::is_false(m.is_connected) && (is_true(m.is_quasicircle) || is_true(m.is_jordan_arc)))
    throw InputError("contradictory flags: curves are connected");
  return m;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

inline CapacityEstimate exact(double v, std::string rule) {
  CapacityEstimate e;
  e.value = v;
  e.kind = Kind::exact;
  e.method = "rules";
  e.rule = std::move(rule);
  return e;
}

inline bool finite_cloud(const SetSpec& s) {
  return s.is<sets::PointCloud>() && !(s.meta.is_connected && s.meta.is_connected->value);
}

inline bool same_shape(const SetSpec& a, const SetSpec& b) {
  if (a.shape.index() != b.shape.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.shape);
        if constexpr (std::is_same_v<T, sets::Disk>) return x.center == y.center && x.radius == y.radius;
        else if constexpr (std::is_same_v<T, sets::Segment>) return (x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a);
        else if constexpr (std::is_same_v<T, sets::Polyline>) return x.points == y.points && x.closed == y.closed;
        else if constexpr (std::is_same_v<T, sets::CircleArcs>) return x.arcs == y.arcs && x.center == y.center && x.radius == y.radius;
        else if constexpr (std::is_same_v<T, sets::Julia>) return x.c == y.c;
        else if constexpr (std::is_same_v<T, sets::PointCloud>) return x.points == y.points;
        else {
          if (x.members.size() != y.members.size()) return false;
          for (std::size_t i = 0; i < x.members.size(); ++i)
            if (!same_shape(x.members[i], y.members[i])) return false;
          return true;
        }
      },
      a.shape);
}

/// Conservative containment of a member in a closed disk.
inline bool inside_disk(const SetSpec& s, const sets::Disk& d) {
  auto in = [&](cplx z) { return std::abs(z - d.center) <= d.radius; };
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, sets::Disk>) return std::abs(x.center - d.center) + x.radius <= d.radius;
        else if constexpr (std::is_same_v<T, sets::Segment>) return in(x.a) && in(x.b);
        else if constexpr (std::is_same_v<T, sets::Polyline> || std::is_same_v<T, sets::PointCloud>)
          return std::all_of(x.points.begin(), x.points.end(), in);
        else if constexpr (std::is_same_v<T, sets::CircleArcs>) return std::abs(x.center - d.center) + x.radius <= d.radius;
        else if constexpr (std::is_same_v<T, sets::Julia>) return false;
        else return std::all_of(x.members.begin(), x.members.end(), [&](const SetSpec& m) { return inside_disk(m, d); });
      },
      s.shape);
}

/// Pieces of a set lying on one line, as parameter intervals along it.
struct LinePieces {
  std::vector<std::pair<cplx, cplx>> pieces;  // degenerate pieces are points
  bool ok = true;
};

inline void collect_pieces(const SetSpec& s, LinePieces& lp) {
  if (!lp.ok) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, sets::Segment>) {
          lp.pieces.push_back({x.a, x.b});
        } else if constexpr (std::is_same_v<T, sets::Polyline>) {
          for (std::size_t i = 1; i < x.points.size(); ++i) lp.pieces.push_back({x.points[i - 1], x.points[i]});
          if (x.closed) lp.pieces.push_back({x.points.back(), x.points.front()});
        } else if constexpr (std::is_same_v<T, sets::PointCloud>) {
          if (!finite_cloud(s)) {
            lp.ok = false;
            return;
          }
          for (auto z : x.points) lp.pieces.push_back({z, z});
        } else if constexpr (std::is_same_v<T, sets::Union>) {
          for (const auto& m : x.members) collect_pieces(m, lp);
        } else {
          lp.ok = false;
        }
      },
      s.shape);
}

/// H¹ of a set made of collinear segments and points, or nothing if the
/// pieces are not on one line.
inline std::optional<double> collinear_length(const SetSpec& s) {
  LinePieces lp;
  collect_pieces(s, lp);
  if (!lp.ok || lp.pieces.empty()) return std::nullopt;
  // direction: the longest chord from the first point
  const cplx p0 = lp.pieces.front().first;
  cplx far = p0;
  double scale = 0.0;
  for (const auto& [a, b] : lp.pieces)
    for (cplx z : {a, b})
      if (std::abs(z - p0) > scale) {
        scale = std::abs(z - p0);
        far = z;
      }
  if (scale == 0.0) return 0.0;
  // keep the real axis exact for real sets
  cplx u = (far - p0) / scale;
  bool real_line = true;
  for (const auto& [a, b] : lp.pieces) real_line = real_line && a.imag() == p0.imag() && b.imag() == p0.imag();
  if (real_line) u = 1.0;
  std::vector<std::pair<double, double>> iv;
  for (const auto& [a, b] : lp.pieces) {
    const cplx ra = (a - p0) * std::conj(u), rb = (b - p0) * std::conj(u);
    if (std::abs(ra.imag()) > 1e-12 * scale || std::abs(rb.imag()) > 1e-12 * scale) return std::nullopt;
    double ta = real_line ? a.real() : ra.real(), tb = real_line ? b.real() : rb.real();
    if (ta > tb) std::swap(ta, tb);
    iv.push_back({ta, tb});
  }
  std::sort(iv.begin(), iv.end());
  double total = 0.0, lo = iv.front().first, hi = iv.front().second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= hi) {
      hi = std::max(hi, iv[i].second);
    } else {
      total += hi - lo;
      lo = iv[i].first;
      hi = iv[i].second;
    }
  }
  return total + (hi - lo);
}

}  // namespace detail

/// Exact γ when a closed-form rule matches, nothing otherwise.
inline std::optional<CapacityEstimate> closed_form_gamma(const SetSpec& s) {
  using namespace detail;
  if (s.is<sets::Disk>()) return exact(s.as<sets::Disk>().radius, "disk: gamma equals the radius");
  if (s.is<sets::Segment>()) {
    const auto& g = s.as<sets::Segment>();
    return exact(std::abs(g.b - g.a) / 4.0, "segment: gamma is a quarter of the length");
  }
  if (s.is<sets::CircleArcs>()) {
    const auto& a = s.as<sets::CircleArcs>();
    if (sets::is_full_circle(a)) return exact(a.radius, "circle: gamma of the outer boundary equals the radius");
    if (sets::arc_components(a) == 1) {
      const double theta = sets::arc_coverage(a);
      return exact(a.radius * std::sin(theta / 4.0),
                   "circular arc: connected, gamma equals logarithmic capacity R sin(theta/4)");
    }
    return std::nullopt;
  }
  if (s.is<sets::Julia>()) {
    const cplx c = s.as<sets::Julia>().c;
    if (julia::in_main_cardioid(c))
      return exact(1.0, "Julia set, c in the main cardioid: Boettcher map z + O(1/z) gives gamma one");
    return std::nullopt;
  }
  if (finite_cloud(s)) return exact(0.0, "finite point set: removable, gamma zero");

  if (s.is<sets::Union>()) {
    // drop removable members and members covered by a disk member
    std::vector<SetSpec> keep;
    std::vector<std::string> notes;
    for (const auto& m : s.as<sets::Union>().members) {
      if (finite_cloud(m)) {
        notes.push_back("dropped a finite point set (gamma zero does not change the union)");
        continue;
      }
      bool dup = false;
      for (const auto& k : keep) dup = dup || same_shape(k, m);
      if (dup) {
        notes.push_back("dropped a repeated member");
        continue;
      }
      keep.push_back(m);
    }
    std::vector<SetSpec> kept;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      bool covered = false;
      for (std::size_t j = 0; j < keep.size() && !covered; ++j) {
        if (i == j || !keep[j].is<sets::Disk>()) continue;
        // ties (identical disks) were removed above; keep the larger one
        covered = inside_disk(keep[i], keep[j].as<sets::Disk>());
      }
      if (covered)
        notes.push_back("dropped a member contained in a disk member");
      else
        kept.push_back(keep[i]);
    }
    if (kept.empty()) return exact(0.0, "union of finite point sets: gamma zero");
    std::optional<CapacityEstimate> r;
    if (kept.size() == 1) {
      r = closed_form_gamma(kept.front());
    } else if (auto len = collinear_length(sets::set_union(kept))) {
      r = exact(*len / 4.0, "subset of a line: gamma is a quarter of its length");
    }
    if (r) {
      if (!notes.empty()) r->certificate["reductions"] = notes;
      return r;
    }
    return std::nullopt;
  }
  if (s.is<sets::Polyline>()) {
    if (auto len = collinear_length(s)) return exact(*len / 4.0, "subset of a line: gamma is a quarter of its length");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Leja points

/// exp of the mean log-distance from the next Leja point to the first n
/// ones estimates the logarithmic capacity of the sampled set. Equal to γ
/// only for connected sets; otherwise the caller must opt in and the
/// result is labelled as logarithmic capacity.
inline CapacityEstimate leja_logcap(std::span<const cplx> pts, std::size_t n, bool connected,
                                    bool allow_disconnected = false) {
  if (n < 3) throw Error("leja: need at least 3 Leja points");
  if (pts.size() <= n) throw Error("leja: the sample has " + std::to_string(pts.size()) + " points, need more than n = " +
                                   std::to_string(n));
  if (!connected && !allow_disconnected)
    throw Error("leja: the set is not known to be connected, and gamma equals logarithmic capacity only for "
                "connected sets; assert is_connected or allow a logcap-only estimate");
  const std::size_t N = pts.size();
  cplx centroid{};
  for (auto z : pts) centroid += z;
  centroid /= static_cast<double>(N);

  auto argmax = [&](const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      // ties within rounding go to the lower index so affine images pick the same points
      if (v[i] > v[best] + 1e-10 * std::max(1.0, std::abs(v[best]))) best = i;
    }
    return best;
  };

  std::vector<double> d0(N);
  for (std::size_t i = 0; i < N; ++i) d0[i] = std::abs(pts[i] - centroid);
  std::vector<std::size_t> chosen{argmax(d0)};
  std::vector<double> score(N, 0.0);
  std::vector<char> used(N, 0);
  used[chosen[0]] = 1;
  json history = json::array();
  double estimate = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const cplx last = pts[chosen.back()];
    for (std::size_t i = 0; i < N; ++i)
      if (!used[i]) score[i] += std::log(std::abs(pts[i] - last));
    std::size_t best = N;
    for (std::size_t i = 0; i < N; ++i) {
      if (used[i]) continue;
      if (best == N || score[i] > score[best] + 1e-10 * std::max(1.0, std::abs(score[best]))) best = i;
    }
    if (best == N || !std::isfinite(score[best])) throw Error("leja: the sample has too few distinct points");
    estimate = std::exp(score[best] / static_cast<double>(k));
    used[best] = 1;
    chosen.push_back(best);
    if ((k & (k - 1)) == 0 || k == n) history.push_back({{"points", k}, {"estimate", estimate}});
  }
  double logsum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) logsum += std::log(std::abs(pts[chosen[i]] - pts[chosen[j]]));
  const double transfinite = std::exp(2.0 * logsum / (static_cast<double>(n) * static_cast<double>(n - 1)));

  CapacityEstimate e;
  e.value = estimate;
  e.kind = Kind::comparable;
  e.method = connected ? "leja" : "leja (logcap only, not gamma)";
  e.rule = connected ? "connected set: gamma equals logarithmic capacity" : "";
  e.params = {{"n", n}, {"sample_size", N}};
  e.certificate = {{"leja_product_by_count", history}, {"transfinite_diameter_of_leja_set", transfinite}};
  return e;
}

// ---------------------------------------------------------------------------
// LP lower bound

inline CapacityEstimate lp_capacity(const SetSpec& s, std::vector<cplx> poles, const lp::Options& opt = {}) {
  if (poles.empty()) poles = lp::default_poles(s);
  const auto r = lp::lp_lower_bound(s, poles, opt);
  CapacityEstimate e;
  e.value = r.value;
  e.kind = Kind::lower_bound;
  e.method = "lp";
  json pj = json::array();
  for (auto w : r.poles) pj.push_back(format_complex(w));
  e.params = {{"poles", pj}, {"degree", opt.degree}, {"boundary_n", opt.boundary_n}};
  json coeff = json::array();
  for (auto a : r.coefficients) coeff.push_back(format_complex(a));
  e.certificate = {{"max_abs_f_refined", r.max_abs_f_refined},
                   {"violation", r.violation},
                   {"value_before_refined_check", r.solve_value},
                   {"best_possible_in_basis", r.dual_bound},
                   {"rounds", r.rounds},
                   {"iterations", r.iterations},
                   {"constraints", r.constraints},
                   {"basis_size", r.basis_size},
                   {"coefficients", coeff}};
  return e;
}

// ---------------------------------------------------------------------------
// Tolsa lower bound

struct TolsaOptions {
  bool alpha_variant = false;     // also report the grid-limited density profile
  double support_tol = 1e-9;      // relative to the set diameter
  menger::KernelOptions kernel{};
};

/// Atoms, midpoints of lexicographic neighbours and dilations of the atoms
/// about the centroid by 1.1, 1.5 and 2.
inline std::vector<cplx> default_tolsa_grid(const measures::DiscreteMeasure& m) {
  std::vector<cplx> g(m.atoms().begin(), m.atoms().end());
  for (std::size_t i = 1; i < m.size(); ++i) g.push_back(0.5 * (m.atoms()[i - 1] + m.atoms()[i]));
  cplx c{};
  for (std::size_t i = 0; i < m.size(); ++i) c += m.weights()[i] * m.atoms()[i];
  c /= measures::total_mass(m);
  for (double k : {1.1, 1.5, 2.0})
    for (auto a : m.atoms()) g.push_back(c + k * (a - c));
  return g;
}

namespace detail {

/// Distance from z to the set, with a tolerance that reflects how well the
/// set is known (Julia sets only through a trace).
struct SupportOracle {
  const SetSpec& s;
  std::optional<sets::CurveSample> trace;
  double slack = 0.0;

  explicit SupportOracle(const SetSpec& set) : s(set) {
    if (s.is<sets::Julia>() && s.as<sets::Julia>().c != cplx{}) {
      trace = julia::trace_julia(julia::params(s.as<sets::Julia>().c), 4096);
      for (std::size_t i = 0; i < trace->size(); ++i)
        slack = std::max(slack, std::abs(trace->points[(i + 1) % trace->size()] - trace->points[i]));
      slack += *trace->trace_offset * 4.0;
    }
  }
  double distance(cplx z) const {
    if (!trace) return sampling::distance_to(s, z);
    double d = kInf;
    for (auto p : trace->points) d = std::min(d, std::abs(p - z));
    return d;
  }
};

inline double set_scale(const SetSpec& s) {
  if (s.is<sets::Julia>()) return 4.0;
  auto pts = sampling::boundary_points(s, 512);
  return std::max(sets::diameter(std::span<const cplx>(pts)), 1e-300);
}

}  // namespace detail

inline CapacityEstimate tolsa_lower_bound(const SetSpec& s, const measures::DiscreteMeasure& m,
                                          std::span<const cplx> query_grid = {}, const TolsaOptions& opt = {}) {
  if (m.empty()) throw Error("tolsa: empty measure");
  detail::SupportOracle oracle(s);
  const double tol = opt.support_tol * detail::set_scale(s) + oracle.slack;
  std::vector<std::string> off;
  for (auto a : m.atoms())
    if (oracle.distance(a) > tol) {
      if (off.size() < 10) off.push_back(format_complex(a));
      else if (off.size() == 10) off.push_back("...");
    }
  if (!off.empty()) {
    std::string list;
    for (const auto& o : off) list += (list.empty() ? "" : ", ") + o;
    throw Error("tolsa: measure is not supported on the set; offending atoms: " + list);
  }
  std::vector<cplx> grid = query_grid.empty() ? default_tolsa_grid(m) : std::vector<cplx>(query_grid.begin(), query_grid.end());
  const auto rep = menger::tolsa_potential(m, grid, false, opt.kernel);
  if (!std::isfinite(rep.max_potential))
    throw Error("tolsa: U is infinite at " + format_complex(rep.query[rep.argmax]) +
                " (pure atom on the grid); give the measure a cell resolution");
  if (!(rep.max_potential > 0.0)) throw Error("tolsa: U vanishes on the grid");
  // U_{tμ} = t U_μ, so the largest admissible t is 1/max U; the check below
  // re-evaluates the rescaled measure and nudges t down if rounding pushes it over 1.
  double t = 1.0 / rep.max_potential;
  auto check = menger::tolsa_potential(measures::scaled(m, t), grid, false, opt.kernel);
  while (check.max_potential > 1.0) {
    t *= (1.0 - 1e-15) / check.max_potential;
    check = menger::tolsa_potential(measures::scaled(m, t), grid, false, opt.kernel);
  }
  double max_m = 0.0, max_c = 0.0;
  for (std::size_t i = 0; i < check.query.size(); ++i) {
    max_m = std::max(max_m, check.maximal[i]);
    max_c = std::max(max_c, check.curvature[i]);
  }
  CapacityEstimate e;
  e.value = t * measures::total_mass(m);
  e.kind = Kind::comparable;
  e.method = "tolsa";
  e.rule = "admissible measure: U <= 1 on the query grid";
  e.params = {{"atoms", m.size()},
              {"mass", measures::total_mass(m)},
              {"resolution", m.resolution()},
              {"grid_points", grid.size()},
              {"grid", query_grid.empty() ? "atoms + neighbour midpoints + dilations 1.1, 1.5, 2 about the centroid"
                                          : "user"}};
  e.certificate = {{"scale_t", t},
                   {"grid_max_U", check.max_potential},
                   {"grid_argmax", format_complex(check.query[check.argmax])},
                   {"grid_max_maximal_function", max_m},
                   {"grid_max_curvature", max_c},
                   {"note", "certified on the query grid only"}};
  if (opt.alpha_variant) {
    const auto scaled_m = measures::scaled(m, t);
    std::vector<double> radii;
    const double diam = sets::diameter(std::span<const cplx>(m.atoms()));
    for (int k = 1; k <= 10; ++k) radii.push_back(std::max(diam, 1e-300) * std::ldexp(1.0, -k));
    json prof = json::array();
    const std::size_t picks = std::min<std::size_t>(8, m.size());
    for (std::size_t j = 0; j < picks; ++j) {
      const std::size_t i = picks == 1 ? 0 : j * (m.size() - 1) / (picks - 1);
      const auto d = measures::linear_density(scaled_m, m.atoms()[i], radii);
      prof.push_back({{"x", format_complex(m.atoms()[i])},
                      {"theta", d.theta},
                      {"theta_upper", d.theta_upper},
                      {"divergent", d.divergent}});
    }
    e.certificate["density_profile"] = prof;
    e.certificate["density_note"] = "grid-limited; vanishing density is required for the continuous variant";
  }
  return e;
}

// ---------------------------------------------------------------------------
// γ dispatcher

enum class Engine { automatic, rules, leja, lp, tolsa };

struct GammaOptions {
  Engine engine = Engine::automatic;
  std::size_t leja_n = 256;
  std::size_t sample_n = 4096;  // boundary sample handed to Leja
  bool allow_disconnected = false;
  std::vector<cplx> poles;
  lp::Options lp{};
  std::size_t tolsa_atoms = 200;
  TolsaOptions tolsa{};
};

/// Default measure for the Tolsa engine: the discretized length measure on
/// a segment, otherwise equal masses on a boundary sample smeared over the
/// median spacing.
inline measures::DiscreteMeasure default_measure(const SetSpec& s, std::size_t n) {
  if (s.is<sets::Segment>()) return measures::segment_measure(s.as<sets::Segment>().a, s.as<sets::Segment>().b, n);
  auto pts = sampling::boundary_points(s, n);
  const double h = sets::median_spacing(std::span<const cplx>(pts));
  auto m = measures::uniform_on(pts);
  return measures::DiscreteMeasure(m.atoms(), m.weights(), h);
}

namespace detail {

inline bool lp_supported(const SetSpec& s) {
  if (s.is<sets::Disk>() || s.is<sets::Segment>()) return true;
  if (!s.is<sets::Union>()) return false;
  for (const auto& m : s.as<sets::Union>().members)
    if (!lp_supported(m)) return false;
  return true;
}

inline CapacityEstimate run_leja(const SetSpec& s, const SetMeta& meta, const GammaOptions& opt) {
  const auto pts = sampling::boundary_points(s, opt.sample_n);
  auto e = leja_logcap(pts, std::min(opt.leja_n, pts.size() - 1), is_true(meta.is_connected), opt.allow_disconnected);
  e.params["boundary_sample"] = opt.sample_n;
  return e;
}

}  // namespace detail

inline CapacityEstimate gamma_estimate(const SetSpec& s, const GammaOptions& opt = {}) {
  const SetMeta meta = derive_meta(s);
  switch (opt.engine) {
    case Engine::rules: {
      auto r = closed_form_gamma(s);
      if (!r) throw Error(std::string("rules: no closed-form rule matches this ") + sets::kind_name(s));
      return *r;
    }
    case Engine::leja: return detail::run_leja(s, meta, opt);
    case Engine::lp: {
      lp::Options o = opt.lp;
      return lp_capacity(s, opt.poles, o);
    }
    case Engine::tolsa: return tolsa_lower_bound(s, default_measure(s, opt.tolsa_atoms), {}, opt.tolsa);
    case Engine::automatic: break;
  }
  if (auto r = closed_form_gamma(s)) return *r;
  if (detail::is_true(meta.is_connected)) return detail::run_leja(s, meta, opt);
  if (detail::lp_supported(s)) return lp_capacity(s, opt.poles, opt.lp);
  if (auto len = sets::known_length(s)) {
    CapacityEstimate e;
    e.value = *len;
    e.kind = Kind::upper_bound;
    e.method = "length";
    e.rule = "gamma is at most the one-dimensional Hausdorff measure";
    return e;
  }
  throw Error(std::string("no gamma engine applies to this ") + sets::kind_name(s) +
              "; assert is_connected for a Leja estimate or supply a measure for the Tolsa engine");
}

// ---------------------------------------------------------------------------
// α rule engine

inline CapacityEstimate alpha_evaluate(const SetSpec& s, const GammaOptions& opt = {}) {
  using detail::is_true;
  const SetMeta meta = derive_meta(s);
  auto rule = [](CapacityEstimate e, std::string r, std::string method = "alpha rules") {
    e.rule = std::move(r);
    e.method = std::move(method);
    return e;
  };
  if (is_true(meta.has_sigma_finite_length)) {
    auto e = detail::exact(0.0, "sigma-finite length: continuous analytic capacity zero");
    e.method = "alpha rules";
    e.certificate["flag"] = meta.has_sigma_finite_length->provenance;
    return e;
  }
  if (s.is<sets::Julia>() && julia::in_main_cardioid(s.as<sets::Julia>().c)) {
    auto e = detail::exact(1.0, "Julia set, c in the main cardioid minus 0: tangent-free quasicircle, alpha equals gamma equals one");
    e.method = "alpha rules";
    return e;
  }
  if (is_true(meta.is_analytic_boundary)) {
    auto g = gamma_estimate(s, opt);
    g.certificate["gamma_method"] = g.method;
    g.certificate["flag"] = meta.is_analytic_boundary->provenance;
    return rule(g, "analytic boundary: alpha equals gamma");
  }
  if (is_true(meta.tangent_free_certificate) && (is_true(meta.is_quasicircle) || is_true(meta.is_jordan_arc))) {
    auto g = gamma_estimate(s, opt);
    g.certificate["gamma_method"] = g.method;
    g.certificate["flag"] = meta.tangent_free_certificate->provenance;
    return rule(g, "tangent-point-free curve: alpha equals gamma on the curve and all subarcs");
  }
  if (s.is<sets::Union>()) {
    std::vector<SetSpec> keep;
    for (const auto& m : s.as<sets::Union>().members)
      if (!detail::finite_cloud(m)) keep.push_back(m);
    if (keep.empty()) return detail::exact(0.0, "finite point set: alpha zero");
    if (keep.size() < s.as<sets::Union>().members.size()) {
      auto e = alpha_evaluate(keep.size() == 1 ? keep.front() : sets::set_union(keep), opt);
      e.certificate["reductions"] = json::array({"dropped finite point sets (removable for bounded functions)"});
      return e;
    }
  }
  // no rule: α lies between 0 and γ
  CapacityEstimate e;
  e.kind = Kind::interval;
  e.value = 0.0;
  e.method = "alpha rules";
  e.rule = "no rule: alpha is at most gamma";
  try {
    const auto g = gamma_estimate(s, opt);
    e.upper = g.value;
    e.certificate = {{"gamma_method", g.method}, {"gamma_kind", kind_name(g.kind)}};
  } catch (const Error& err) {
    e.upper = std::nullopt;
    e.certificate = {{"gamma_error", err.what()}};
  }
  return e;
}

// ---------------------------------------------------------------------------
// Jordan-curve classification

enum class Verdict { yes, no, inconclusive };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::yes ? "true" : v == Verdict::no ? "false" : "inconclusive";
}

inline constexpr std::array<const char*, 7> kConditionNames = {
    "dirichlet_algebra",                   // A_J is a Dirichlet algebra
    "harmonic_measures_mutually_singular", // ω ⊥ ω*
    "tangent_points_length_zero",          // H¹(T_J) = 0
    "alpha_equals_gamma_on_subarcs",
    "alpha_comparable_to_gamma_on_subarcs",
    "harmonic_measures_singular_to_length",  // ω ⊥ H¹ and ω* ⊥ H¹
    "purely_unrectifiable",
};

struct ConditionVerdict {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::string evidence;
};

struct ClassificationReport {
  std::string curve_type;  // "closed curve", "arc" or "unspecified"
  bool quasicircle = false;
  std::array<ConditionVerdict, 7> conditions;
  std::string relationship;
  bool gamma_extremal_exists = true;
  std::optional<bool> alpha_extremal_exists;
  std::string extremal_note;
};

namespace detail {

struct Edge {
  int from, to;
};

inline std::vector<Edge> implication_edges(const std::string& type, bool quasicircle) {
  std::vector<Edge> e;
  if (type == "closed curve") {
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) e.push_back({i, j});
    e.push_back({6, 5});
    e.push_back({5, 0});
    if (quasicircle) {
      e.push_back({0, 5});
      e.push_back({5, 6});
    }
  } else if (type == "arc") {
    e.push_back({2, 3});
  }
  e.push_back({3, 4});
  return e;
}

}  // namespace detail

/// Verdicts that break the implication graph of the report's curve type.
inline std::vector<std::string> implication_violations(const ClassificationReport& r) {
  std::vector<std::string> out;
  for (auto [a, b] : detail::implication_edges(r.curve_type, r.quasicircle))
    if (r.conditions[a].verdict == Verdict::yes && r.conditions[b].verdict == Verdict::no)
      out.push_back(std::string(kConditionNames[a]) + " is true but " + kConditionNames[b] + " is false");
  return out;
}

inline ClassificationReport classify_jordan_curve(const SetSpec& s) {
  using detail::is_true;
  bool is_curve = s.is<sets::Segment>() || s.is<sets::Polyline>() || s.is<sets::Julia>() || s.is<sets::PointCloud>();
  if (s.is<sets::CircleArcs>()) is_curve = sets::arc_components(s.as<sets::CircleArcs>()) == 1;
  if (s.is<sets::Julia>() && !julia::in_main_cardioid(s.as<sets::Julia>().c))
    throw InputError("classify: Julia sets are Jordan curves only for c in the main cardioid");
  if (!is_curve) throw InputError(std::string("classify: a ") + sets::kind_name(s) + " is not a Jordan curve or arc");
  const SetMeta meta = derive_meta(s);
  if (s.is<sets::Polyline>() && !meta.is_jordan_arc)
    throw InputError("classify: the polyline intersects itself, so it is not a Jordan curve or arc");

  ClassificationReport r;
  for (std::size_t i = 0; i < 7; ++i) r.conditions[i].name = kConditionNames[i];
  if (is_true(meta.is_jordan_arc))
    r.curve_type = "arc";
  else if (is_true(meta.is_quasicircle) || (meta.is_jordan_arc && !meta.is_jordan_arc->value))
    r.curve_type = "closed curve";
  else
    r.curve_type = "unspecified";
  r.quasicircle = is_true(meta.is_quasicircle);

  std::array<std::optional<std::pair<Verdict, std::string>>, 7> facts;
  auto set_fact = [&](int i, Verdict v, const std::string& why) {
    if (facts[i] && facts[i]->first != v) throw InputError("classify: conflicting certificates for " + std::string(kConditionNames[i]));
    if (!facts[i]) facts[i] = {v, why};
  };
  if (is_true(meta.tangent_free_certificate) && r.curve_type != "unspecified")
    set_fact(2, Verdict::yes, meta.tangent_free_certificate->provenance);
  if (is_true(meta.has_sigma_finite_length) && r.curve_type != "unspecified") {
    const std::string why = "sigma-finite length (" + meta.has_sigma_finite_length->provenance +
                            "): alpha of every subarc is 0 while gamma of a subarc is at least diam/4 > 0";
    set_fact(3, Verdict::no, why);
    set_fact(4, Verdict::no, why);
    if (sets::known_length(s)) set_fact(6, Verdict::no, "finite length: the curve is itself rectifiable");
  }

  // propagate: truth forward, falsity backward, to a fixed point
  std::array<Verdict, 7> v;
  std::array<std::string, 7> ev;
  for (int i = 0; i < 7; ++i) {
    v[i] = facts[i] ? facts[i]->first : Verdict::inconclusive;
    ev[i] = facts[i] ? facts[i]->second : "no certificate";
  }
  const auto edges = detail::implication_edges(r.curve_type, r.quasicircle);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : edges) {
      if (v[a] == Verdict::yes && v[b] != Verdict::yes) {
        if (v[b] == Verdict::no) throw InputError("classify: certificates contradict the implication graph");
        v[b] = Verdict::yes;
        ev[b] = std::string("implied by ") + kConditionNames[a];
        changed = true;
      }
      if (v[b] == Verdict::no && v[a] != Verdict::no) {
        if (v[a] == Verdict::yes) throw InputError("classify: certificates contradict the implication graph");
        v[a] = Verdict::no;
        ev[a] = std::string("fails because ") + kConditionNames[b] + " fails";
        changed = true;
      }
    }
  }
  for (int i = 0; i < 7; ++i) {
    r.conditions[i].verdict = v[i];
    r.conditions[i].evidence = ev[i];
  }

  const Verdict eq = v[3];
  r.relationship = eq == Verdict::yes  ? "alpha equals gamma on every subarc"
                   : eq == Verdict::no ? "alpha is strictly smaller than gamma on some subarc"
                                       : "undetermined";
  r.gamma_extremal_exists = true;
  if (r.curve_type == "arc" && v[2] == Verdict::yes) {
    r.alpha_extremal_exists = false;
    r.extremal_note = "tangent-point-free arc: no continuous extremal function attains alpha";
  } else if (is_true(meta.has_sigma_finite_length)) {
    r.alpha_extremal_exists = true;
    r.extremal_note = "alpha is zero, attained by the zero function";
  } else {
    r.extremal_note = "gamma is always attained; no rule decides the continuous case";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Density profile α(B(z,δ) ∩ J)/δ

struct ProfileRow {
  double delta = 0.0;
  std::optional<double> ratio;
  Kind kind = Kind::exact;
  std::string rule;
  bool out_of_regime = false;
};

inline std::vector<ProfileRow> gamelin_garnett_profile(const SetSpec& s, cplx z, std::span<const double> deltas,
                                                       std::size_t sample_n = 4096) {
  using detail::is_true;
  if (deltas.empty()) throw InputError("profile: no radii given");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw InputError("profile: radii must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InputError("profile: radii must be decreasing");
  }
  const SetMeta meta = derive_meta(s);
  const auto curve = sampling::boundary_curve(s, sample_n);
  const double diam = sets::diameter(curve);
  // distance to the sampled polygon
  double dist = kInf;
  const std::size_t n = curve.size();
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(curve.points[i] - z) < std::abs(curve.points[nearest] - z)) nearest = i;
    if (i + 1 < n || curve.closed) dist = std::min(dist, sets::distance_to_segment(z, curve.points[i], curve.points[(i + 1) % n]));
  }
  double tol = 1e-6 * diam;
  if (curve.trace_offset) tol += 4.0 * *curve.trace_offset;
  if (dist > tol) throw InputError("profile: " + format_complex(z) + " is not on the curve (distance " + std::to_string(dist) + ")");

  const bool zero = is_true(meta.has_sigma_finite_length);
  const bool equal = is_true(meta.tangent_free_certificate) && (is_true(meta.is_quasicircle) || is_true(meta.is_jordan_arc));
  std::vector<ProfileRow> rows;
  for (double d : deltas) {
    ProfileRow row;
    row.delta = d;
    row.out_of_regime = d > diam;
    if (zero) {
      row.ratio = 0.0;
      row.rule = "piece of a sigma-finite length set: alpha zero";
    } else if (equal) {
      // sub-arc through z inside the closed ball
      std::vector<cplx> arc{curve.points[nearest]};
      for (int dir : {+1, -1}) {
        std::size_t i = nearest;
        for (std::size_t step = 1; step < n; ++step) {
          std::size_t j;
          if (dir > 0) {
            if (i + 1 >= n && !curve.closed) break;
            j = (i + 1) % n;
          } else {
            if (i == 0 && !curve.closed) break;
            j = (i + n - 1) % n;
          }
          if (std::abs(curve.points[j] - z) > d) break;
          arc.push_back(curve.points[j]);
          i = j;
        }
      }
      const double sub = sets::diameter(std::span<const cplx>(arc));
      row.ratio = sub / 4.0 / d;
      row.kind = Kind::lower_bound;
      row.rule = "alpha equals gamma on subarcs, gamma of a subarc at least diam/4";
    } else {
      row.kind = Kind::interval;
      row.rule = "no rule";
    }
    if (row.out_of_regime) row.rule += "; delta exceeds the curve diameter";
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Semiadditivity

struct SemiadditivityReport {
  CapacityEstimate e, f, both;
  double ratio = 0.0;  // γ(E∪F)/(γ(E)+γ(F)) from the estimates
};

inline SemiadditivityReport semiadditivity_check(const SetSpec& e, const SetSpec& f, const GammaOptions& opt = {}) {
  SemiadditivityReport r;
  r.e = gamma_estimate(e, opt);
  r.f = gamma_estimate(f, opt);
  r.both = gamma_estimate(sets::set_union({e, f}), opt);
  const double sum = r.e.value + r.f.value;
  r.ratio = sum > 0 ? r.both.value / sum : 0.0;
  return r;
}

struct TranslateRow {
  double distance = 0.0;
  CapacityEstimate union_estimate;
  double sum = 0.0;
  double ratio = 0.0;
};

/// γ(E ∪ (F + d)) over the given real shifts d.
inline std::vector<TranslateRow> translate_table(const SetSpec& e, const SetSpec& f, std::span<const double> shifts,
                                                 const GammaOptions& opt = {}) {
  const double ge = gamma_estimate(e, opt).value;
  const double gf = gamma_estimate(f, opt).value;
  std::vector<TranslateRow> rows;
  for (double d : shifts) {
    TranslateRow row;
    row.distance = d;
    GammaOptions o = opt;
    if (!o.poles.empty()) throw Error("translate_table: use default poles");
    row.union_estimate = gamma_estimate(sets::set_union({e, sets::affine_image(f, 1.0, d)}), o);
    row.sum = ge + gf;
    row.ratio = row.sum > 0 ? row.union_estimate.value / row.sum : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace caplab::capacity

#endif  // CAPLAB_CAPACITY_HPP
