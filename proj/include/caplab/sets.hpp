#ifndef CAPLAB_SETS_HPP
#define CAPLAB_SETS_HPP

// Compact planar sets, ordered boundary samples, and discrete
// rectifiability diagnostics (diameter, length, Hausdorff premeasure,
// flatness and tangent profiles).

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"

namespace caplab::sets {

/// A metadata flag plus where it came from. Flags are never inferred
/// silently; `provenance` names the user assertion or the diagnostic.
struct Flag {
  bool value = false;
  std::string provenance;
};

struct SetMeta {
  std::optional<Flag> is_connected;
  std::optional<Flag> is_quasicircle;
  std::optional<Flag> has_sigma_finite_length;
  std::optional<Flag> is_analytic_boundary;
  std::optional<Flag> tangent_free_certificate;
  std::optional<Flag> is_jordan_arc;  // a curve with two endpoints rather than a closed curve
};

struct Disk {
  cplx center;
  double radius = 1.0;
};

struct Segment {
  cplx a;
  cplx b;
};

struct Polyline {
  std::vector<cplx> points;
  bool closed = false;
};

/// Arcs of the circle |z - center| = radius, angles in radians with
/// end > start. The default circle is the unit circle.
struct CircleArcs {
  std::vector<std::pair<double, double>> arcs;
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

struct Julia {
  cplx c;
};

struct PointCloud {
  std::vector<cplx> points;
};

struct SetSpec;

struct Union {
  std::vector<SetSpec> members;
};

using Shape = std::variant<Disk, Segment, Polyline, CircleArcs, Union, Julia, PointCloud>;

struct SetSpec {
  Shape shape;
  SetMeta meta;

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(shape);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(shape);
  }
};

inline const char* kind_name(const SetSpec& s) {
  static constexpr const char* names[] = {"disk", "segment", "polyline", "arcs", "union", "julia", "cloud"};
  return names[s.shape.index()];
}

// ---------------------------------------------------------------------------
// Construction and validation

inline void validate(const SetSpec& s);

namespace detail {

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void validate_shape(const Disk& d) {
  if (!finite(d.center) || !(d.radius > 0.0) || !std::isfinite(d.radius))
    throw InputError("disk: radius must be positive and finite");
}
inline void validate_shape(const Segment& s) {
  if (!finite(s.a) || !finite(s.b)) throw InputError("segment: endpoints must be finite");
}
inline void validate_shape(const Polyline& p) {
  if (p.points.size() < 2) throw InputError("polyline: needs at least 2 points");
  for (auto z : p.points)
    if (!finite(z)) throw InputError("polyline: non-finite point");
}
inline void validate_shape(const CircleArcs& a) {
  if (a.arcs.empty()) throw InputError("arcs: empty arc list");
  if (!(a.radius > 0.0) || !finite(a.center)) throw InputError("arcs: bad circle");
  for (auto [lo, hi] : a.arcs)
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      throw InputError("arcs: each arc needs end angle > start angle");
}
inline void validate_shape(const Union& u) {
  if (u.members.empty()) throw InputError("union: no members");
  for (const auto& m : u.members) validate(m);
}
inline void validate_shape(const Julia& j) {
  if (!finite(j.c)) throw InputError("julia: parameter must be finite");
}
inline void validate_shape(const PointCloud& p) {
  if (p.points.empty()) throw InputError("cloud: no points");
  for (auto z : p.points)
    if (!finite(z)) throw InputError("cloud: non-finite point");
}

}  // namespace detail

inline void validate(const SetSpec& s) {
  std::visit([](const auto& sh) { detail::validate_shape(sh); }, s.shape);
}

inline SetSpec make(Shape shape, SetMeta meta = {}) {
  SetSpec s{std::move(shape), std::move(meta)};
  validate(s);
  return s;
}

inline SetSpec disk(cplx center, double radius) { return make(Disk{center, radius}); }
inline SetSpec segment(cplx a, cplx b) { return make(Segment{a, b}); }
inline SetSpec unit_circle() { return make(CircleArcs{{{0.0, kTwoPi}}}); }
inline SetSpec julia(cplx c) { return make(Julia{c}); }
inline SetSpec cloud(std::vector<cplx> pts) { return make(PointCloud{std::move(pts)}); }
inline SetSpec set_union(std::vector<SetSpec> members) { return make(Union{std::move(members)}); }

/// Total angular coverage of a list of arcs after merging overlaps, capped at 2π.
inline double arc_coverage(const CircleArcs& a) {
  std::vector<std::pair<double, double>> iv;
  for (auto [lo, hi] : a.arcs) {
    if (hi - lo >= kTwoPi) return kTwoPi;
    double s = std::fmod(lo, kTwoPi);
    if (s < 0) s += kTwoPi;
    const double e = s + (hi - lo);
    if (e <= kTwoPi) {
      iv.push_back({s, e});
    } else {
      iv.push_back({s, kTwoPi});
      iv.push_back({0.0, e - kTwoPi});
    }
  }
  std::sort(iv.begin(), iv.end());
  double total = 0.0, cur_lo = iv[0].first, cur_hi = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= cur_hi) {
      cur_hi = std::max(cur_hi, iv[i].second);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = iv[i].first;
      cur_hi = iv[i].second;
    }
  }
  total += cur_hi - cur_lo;
  return std::min(total, kTwoPi);
}

inline bool is_full_circle(const CircleArcs& a) { return arc_coverage(a) >= kTwoPi * (1.0 - 1e-15); }

/// Number of connected pieces of a set of arcs (merged modulo 2π).
inline int arc_components(const CircleArcs& a) {
  if (is_full_circle(a)) return 1;
  std::vector<std::pair<double, double>> iv;
  for (auto [lo, hi] : a.arcs) {
    double s = std::fmod(lo, kTwoPi);
    if (s < 0) s += kTwoPi;
    iv.push_back({s, s + (hi - lo)});
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (auto& p : iv) {
    if (!merged.empty() && p.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }
  int n = static_cast<int>(merged.size());
  if (n > 1 && merged.back().second >= merged.front().first + kTwoPi) --n;
  return n;
}

/// Image of the set under z -> scale*z + shift. Julia sets are not closed
/// under affine maps, so they are rejected.
inline SetSpec affine_image(const SetSpec& s, cplx scale, cplx shift) {
  if (scale == cplx{}) throw Error("affine_image: zero scale");
  auto map = [&](cplx z) { return scale * z + shift; };
  const double k = std::abs(scale);
  SetSpec out = std::visit(
      [&](const auto& sh) -> SetSpec {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return SetSpec{Disk{map(sh.center), k * sh.radius}, {}};
        } else if constexpr (std::is_same_v<T, Segment>) {
          return SetSpec{Segment{map(sh.a), map(sh.b)}, {}};
        } else if constexpr (std::is_same_v<T, Polyline>) {
          Polyline p{{}, sh.closed};
          for (auto z : sh.points) p.points.push_back(map(z));
          return SetSpec{p, {}};
        } else if constexpr (std::is_same_v<T, CircleArcs>) {
          CircleArcs a = sh;
          const double rot = std::arg(scale);
          for (auto& [lo, hi] : a.arcs) {
            lo += rot;
            hi += rot;
          }
          a.center = map(sh.center);
          a.radius = k * sh.radius;
          return SetSpec{a, {}};
        } else if constexpr (std::is_same_v<T, Union>) {
          Union u;
          for (const auto& m : sh.members) u.members.push_back(affine_image(m, scale, shift));
          return SetSpec{u, {}};
        } else if constexpr (std::is_same_v<T, PointCloud>) {
          PointCloud p;
          for (auto z : sh.points) p.points.push_back(map(z));
          return SetSpec{p, {}};
        } else {
          throw Error("affine_image: Julia sets are not closed under affine maps");
        }
      },
      s.shape);
  out.meta = s.meta;  // all flags are affine invariant
  return out;
}

// ---------------------------------------------------------------------------
// Curve samples

/// Ordered boundary points. `params` are external angles (in turns) for
/// Julia traces, or an arc parameter in [0,1] otherwise.
struct CurveSample {
  std::vector<cplx> points;
  std::vector<double> params;
  bool closed = false;
  /// Radius offset ε used when the sample approximates boundary values
  /// from outside (Böttcher traces); absent otherwise.
  std::optional<double> trace_offset;

  void check() const {
    if (points.size() != params.size()) throw Error("CurveSample: points/params length mismatch");
    for (std::size_t i = 1; i < params.size(); ++i)
      if (!(params[i] > params[i - 1])) throw Error("CurveSample: params must be strictly increasing");
  }
  std::size_t size() const { return points.size(); }
};

inline CurveSample make_curve(std::vector<cplx> pts, bool closed) {
  CurveSample c;
  const std::size_t n = pts.size();
  c.params.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    c.params[i] = closed ? static_cast<double>(i) / static_cast<double>(n)
                         : (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0);
  c.points = std::move(pts);
  c.closed = closed;
  return c;
}

inline CurveSample circle_sample(std::size_t n, cplx center = {}, double radius = 1.0) {
  std::vector<cplx> pts(n);
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = center + std::polar(radius, kTwoPi * (static_cast<double>(k) / static_cast<double>(n)));
  return make_curve(std::move(pts), true);
}

inline CurveSample segment_sample(cplx a, cplx b, std::size_t n) {
  if (n < 2) throw Error("segment_sample: need at least 2 points");
  std::vector<cplx> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    pts[k] = a + t * (b - a);
  }
  pts.back() = b;
  return make_curve(std::move(pts), false);
}

// ---------------------------------------------------------------------------
// Diameter and length

namespace detail {

inline std::vector<cplx> convex_hull(std::vector<cplx> p) {
  auto less = [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); };
  std::sort(p.begin(), p.end(), less);
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace detail

/// Largest pairwise distance; 0 for a single point.
inline double diameter(std::span<const cplx> pts) {
  if (pts.empty()) throw Error("diameter: empty point set");
  const auto hull = detail::convex_hull({pts.begin(), pts.end()});
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, std::abs(hull[i] - hull[j]));
  return best;
}

inline double diameter(const CurveSample& c) { return diameter(std::span<const cplx>(c.points)); }

/// Sum of chord lengths, plus the closing chord for closed samples.
inline double discrete_length(const CurveSample& c) {
  if (c.size() < 2) throw Error("discrete_length: need at least 2 points");
  double len = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) len += std::abs(c.points[i] - c.points[i - 1]);
  if (c.closed) len += std::abs(c.points.front() - c.points.back());
  return len;
}

// ---------------------------------------------------------------------------
// Hausdorff premeasure (greedy upper estimate)

/// Median nearest-neighbour distance; 0 for fewer than two distinct points.
inline double median_spacing(std::span<const cplx> pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a].real() < pts[b].real(); });
  std::vector<double> nn(n, kInf);
  for (std::size_t oi = 0; oi < n; ++oi) {
    const cplx p = pts[order[oi]];
    double best = kInf;
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const cplx q = pts[order[oj]];
      if (q.real() - p.real() >= best) break;
      const double d = std::abs(q - p);
      if (d > 0.0) best = std::min(best, d);
    }
    for (std::size_t oj = oi; oj-- > 0;) {
      const cplx q = pts[order[oj]];
      if (p.real() - q.real() >= best) break;
      const double d = std::abs(q - p);
      if (d > 0.0) best = std::min(best, d);
    }
    nn[oi] = best;
  }
  std::vector<double> finite_nn;
  for (double d : nn)
    if (std::isfinite(d)) finite_nn.push_back(d);
  if (finite_nn.empty()) return 0.0;
  std::nth_element(finite_nn.begin(), finite_nn.begin() + finite_nn.size() / 2, finite_nn.end());
  return finite_nn[finite_nn.size() / 2];
}

namespace detail {

/// One greedy cover: clusters of diameter <= delta - h, each inflated by h.
inline double greedy_cover_value(const std::vector<cplx>& sorted_pts, double s, double delta, double h) {
  const std::size_t n = sorted_pts.size();
  const double max_diam = std::max(0.0, delta - h);
  std::vector<char> covered(n, 0);
  std::vector<std::pair<double, std::size_t>> cand;
  std::vector<std::size_t> cluster;
  double total = 0.0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (covered[seed]) continue;
    const cplx p = sorted_pts[seed];
    cand.clear();
    for (std::size_t j = seed + 1; j < n; ++j) {
      if (sorted_pts[j].real() - p.real() > max_diam) break;
      if (covered[j]) continue;
      const double d = std::abs(sorted_pts[j] - p);
      if (d <= max_diam) cand.push_back({d, j});
    }
    std::sort(cand.begin(), cand.end());
    cluster.assign(1, seed);
    covered[seed] = 1;
    double diam = 0.0;
    for (auto [d, j] : cand) {
      double grow = diam;
      bool ok = true;
      for (auto m : cluster) {
        const double dm = std::abs(sorted_pts[j] - sorted_pts[m]);
        if (dm > max_diam) {
          ok = false;
          break;
        }
        grow = std::max(grow, dm);
      }
      if (!ok) continue;
      cluster.push_back(j);
      covered[j] = 1;
      diam = grow;
    }
    total += std::pow(std::min(diam + h, delta), s);
  }
  return total;
}

}  // namespace detail

/// Greedy upper estimate of the s-dimensional Hausdorff δ-premeasure of a
/// sampled set. Each cover cluster is inflated by the median sample spacing
/// h (so an isolated point costs nothing and a sampled continuum is charged
/// for the gaps between samples). Below the sampling resolution every
/// distinct point is its own cluster, which gives the floor value
/// (#points)·h^s. The result is the minimum of that floor and the greedy
/// values over the dyadic chain δ, δ/2, δ/4, ... above h, hence
/// non-increasing along nested dyadic δ grids.
inline double hausdorff_premeasure(std::span<const cplx> pts, double s, double delta) {
  if (pts.empty()) throw Error("hausdorff_premeasure: empty point set");
  if (!(s > 0.0) || s > 2.0) throw Error("hausdorff_premeasure: s must lie in (0,2]");
  if (!(delta > 0.0)) throw Error("hausdorff_premeasure: delta must be positive");
  std::vector<cplx> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const double h = median_spacing(sorted);
  double best = static_cast<double>(sorted.size()) * std::pow(h, s);
  for (double d = delta; d > h; d /= 2) best = std::min(best, detail::greedy_cover_value(sorted, s, d, h));
  return best;
}

// ---------------------------------------------------------------------------
// Profiles

/// One row of a flatness or tangent profile. `value` is empty when the
/// scale is below the local sample spacing or too few neighbours exist.
struct ProfileEntry {
  std::size_t index = 0;
  double scale = 0.0;
  std::optional<double> value;
  bool resolved() const { return value.has_value(); }
};

namespace detail {

inline double local_spacing(const CurveSample& c, std::size_t i) {
  const std::size_t n = c.size();
  double s = 0.0;
  if (i + 1 < n) s = std::max(s, std::abs(c.points[i + 1] - c.points[i]));
  else if (c.closed) s = std::max(s, std::abs(c.points[0] - c.points[i]));
  if (i > 0) s = std::max(s, std::abs(c.points[i] - c.points[i - 1]));
  else if (c.closed) s = std::max(s, std::abs(c.points[i] - c.points[n - 1]));
  return s;
}

}  // namespace detail

/// Flatness of the sample near each point: neighbours within distance r are
/// projected on the normal of their principal axis; the value is the
/// half-width of that spread over the ball diameter 2r (so in [0, 1/2]).
inline std::vector<ProfileEntry> beta_profile(const CurveSample& c, std::span<const double> scales) {
  if (c.size() < 3) throw Error("beta_profile: need at least 3 points");
  const std::size_t n = c.size(), ns = scales.size();
  std::vector<ProfileEntry> out(n * ns);
  parallel_for(n, [&](std::size_t i) {
    const double spacing = detail::local_spacing(c, i);
    const cplx p = c.points[i];
    std::vector<cplx> nb;
    for (std::size_t k = 0; k < ns; ++k) {
      const double r = scales[k];
      ProfileEntry& e = out[i * ns + k];
      e.index = i;
      e.scale = r;
      if (!(r > 0.0) || r < spacing) continue;
      nb.clear();
      for (auto q : c.points)
        if (std::abs(q - p) <= r) nb.push_back(q);
      if (nb.size() < 3) continue;
      cplx mean{};
      for (auto q : nb) mean += q;
      mean /= static_cast<double>(nb.size());
      double sxx = 0, syy = 0, sxy = 0;
      for (auto q : nb) {
        const cplx d = q - mean;
        sxx += d.real() * d.real();
        syy += d.imag() * d.imag();
        sxy += d.real() * d.imag();
      }
      const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
      const cplx normal{-std::sin(phi), std::cos(phi)};
      double lo = kInf, hi = -kInf;
      for (auto q : nb) {
        const cplx d = q - mean;
        const double o = d.real() * normal.real() + d.imag() * normal.imag();
        lo = std::min(lo, o);
        hi = std::max(hi, o);
      }
      e.value = 0.5 * (hi - lo) / (2.0 * r);
    }
  });
  return out;
}

/// Result of fitting directions to the pair θ / θ+π.
struct SplitFit {
  double theta = 0.0;        // in [0, π)
  double oscillation = 0.0;  // max angular deviation, radians
};

/// Smallest arc containing all angles; θ is its midpoint reduced mod π.
/// Ties between equally large gaps go to the smaller θ.
inline SplitFit fit_split(std::vector<double> angles) {
  for (auto& a : angles) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
  }
  std::sort(angles.begin(), angles.end());
  const std::size_t m = angles.size();
  SplitFit best{0.0, kInf};
  if (m == 0) return best;
  double max_gap = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double next = (i + 1 < m) ? angles[i + 1] : angles[0] + kTwoPi;
    const double gap = next - angles[i];
    const double start = (i + 1 < m) ? angles[i + 1] : angles[0];
    const double width = kTwoPi - gap;
    double theta = std::fmod(start + 0.5 * width, kPi);
    if (theta < 0) theta += kPi;
    if (gap > max_gap || (gap == max_gap && theta < best.theta)) {
      max_gap = gap;
      best = {theta, 0.5 * width};
    }
  }
  return best;
}

/// Angular oscillation of one-sided chord directions at each sample point.
/// For scale r, chords to points of the sub-arc through t₀ with
/// r/2 < |η(t) − η(t₀)| ≤ r are collected; backward chords are rotated by π
/// so a tangent point yields directions clustered around a single θ.
inline std::vector<ProfileEntry> tangent_profile(const CurveSample& c, std::span<const double> scales) {
  if (c.size() < 5) throw Error("tangent_profile: need at least 5 points");
  const std::size_t n = c.size(), ns = scales.size();
  std::vector<ProfileEntry> out(n * ns);
  parallel_for(n, [&](std::size_t i) {
    const double spacing = detail::local_spacing(c, i);
    const cplx p = c.points[i];
    std::vector<double> dirs;
    for (std::size_t k = 0; k < ns; ++k) {
      const double r = scales[k];
      ProfileEntry& e = out[i * ns + k];
      e.index = i;
      e.scale = r;
      if (!(r > 0.0) || r < 2.0 * spacing) continue;
      dirs.clear();
      bool fwd = false, bwd = false;
      for (int side : {+1, -1}) {
        for (std::size_t step = 1; step < n; ++step) {
          std::size_t j;
          if (side > 0) {
            if (i + step >= n && !c.closed) break;
            j = (i + step) % n;
          } else {
            if (step > i && !c.closed) break;
            j = (i + n - step) % n;
          }
          const cplx d = c.points[j] - p;
          const double dist = std::abs(d);
          if (dist > r) break;
          if (dist > 0.5 * r) {
            dirs.push_back(std::arg(d) + (side > 0 ? 0.0 : kPi));
            (side > 0 ? fwd : bwd) = true;
          }
        }
      }
      if (!fwd || !bwd) continue;
      e.value = fit_split(dirs).oscillation;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Geometry helpers used by the capacity engines

inline double distance_to_segment(cplx z, cplx a, cplx b) {
  const cplx ab = b - a;
  const double l2 = std::norm(ab);
  if (l2 == 0.0) return std::abs(z - a);
  double t = ((z - a) * std::conj(ab)).real() / l2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

inline double distance_to_arcs(cplx z, const CircleArcs& a) {
  const cplx d = z - a.center;
  const double radial = std::abs(std::abs(d) - a.radius);
  if (is_full_circle(a)) return radial;
  double best = kInf;
  const double ang = std::arg(d);
  for (auto [lo, hi] : a.arcs) {
    double rel = std::fmod(ang - lo, kTwoPi);
    if (rel < 0) rel += kTwoPi;
    if (rel <= hi - lo) best = std::min(best, radial);
    best = std::min(best, std::abs(z - (a.center + std::polar(a.radius, lo))));
    best = std::min(best, std::abs(z - (a.center + std::polar(a.radius, hi))));
  }
  return best;
}

/// Total length when finite and known in closed form (Julia sets excluded).
inline std::optional<double> known_length(const SetSpec& s) {
  return std::visit(
      [](const auto& sh) -> std::optional<double> {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Segment>) {
          return std::abs(sh.b - sh.a);
        } else if constexpr (std::is_same_v<T, Polyline>) {
          double l = 0;
          for (std::size_t i = 1; i < sh.points.size(); ++i) l += std::abs(sh.points[i] - sh.points[i - 1]);
          if (sh.closed) l += std::abs(sh.points.front() - sh.points.back());
          return l;
        } else if constexpr (std::is_same_v<T, CircleArcs>) {
          return arc_coverage(sh) * sh.radius;
        } else if constexpr (std::is_same_v<T, PointCloud>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Union>) {
          double l = 0;
          for (const auto& m : sh.members) {
            auto ml = known_length(m);
            if (!ml) return std::nullopt;
            l += *ml;
          }
          return l;
        } else {
          return std::nullopt;
        }
      },
      s.shape);
}

}  // namespace caplab::sets

#endif  // CAPLAB_SETS_HPP
