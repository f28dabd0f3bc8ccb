#ifndef CAPLAB_SAMPLING_HPP
#define CAPLAB_SAMPLING_HPP

// Boundary samples and distances for every SetSpec variant, including
// traced Julia sets.

#include <algorithm>
#include <cmath>
#include <vector>

#include "julia.hpp"
#include "sets.hpp"

namespace caplab::sampling {

using sets::CurveSample;
using sets::SetSpec;

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 2;
  while (p < n) p <<= 1;
  return p;
}

inline CurveSample polyline_sample(const sets::Polyline& pl, std::size_t n) {
  std::vector<cplx> v = pl.points;
  if (pl.closed) v.push_back(v.front());
  std::vector<double> cum(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) cum[i] = cum[i - 1] + std::abs(v[i] - v[i - 1]);
  const double total = cum.back();
  if (!(total > 0.0)) throw Error("polyline has zero length");
  std::vector<cplx> pts(n);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = total * (pl.closed ? static_cast<double>(k) / static_cast<double>(n)
                                        : static_cast<double>(k) / static_cast<double>(n - 1));
    while (seg + 1 < v.size() && cum[seg] < s) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double t = len > 0 ? std::clamp((s - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    pts[k] = v[seg - 1] + t * (v[seg] - v[seg - 1]);
  }
  if (!pl.closed) pts.back() = pl.points.back();
  return sets::make_curve(std::move(pts), pl.closed);
}

inline CurveSample arc_sample(const sets::CircleArcs& a, std::size_t n) {
  if (sets::is_full_circle(a)) return sets::circle_sample(n, a.center, a.radius);
  if (a.arcs.size() != 1) throw Error("arc family with several arcs is not a single curve");
  const auto [lo, hi] = a.arcs.front();
  std::vector<cplx> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    pts[k] = a.center + std::polar(a.radius, lo + t * (hi - lo));
  }
  return sets::make_curve(std::move(pts), false);
}

inline double weight_of(const SetSpec& s) {
  if (s.is<sets::PointCloud>()) return 0.0;
  if (s.is<sets::Julia>()) return 4.0;
  if (s.is<sets::Disk>()) return kTwoPi * s.as<sets::Disk>().radius;
  if (auto l = sets::known_length(s)) return *l;
  return 1.0;
}

}  // namespace detail

/// Ordered sample of a set that is a single curve or arc: a disk gives its
/// boundary circle, a Julia set its Böttcher trace (n rounded up to a power
/// of two), a point cloud its points in the given order.
inline CurveSample boundary_curve(const SetSpec& s, std::size_t n) {
  if (n < 2) throw Error("boundary_curve: need at least 2 points");
  return std::visit(
      [&](const auto& sh) -> CurveSample {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, sets::Disk>) {
          return sets::circle_sample(n, sh.center, sh.radius);
        } else if constexpr (std::is_same_v<T, sets::Segment>) {
          return sets::segment_sample(sh.a, sh.b, n);
        } else if constexpr (std::is_same_v<T, sets::Polyline>) {
          return detail::polyline_sample(sh, n);
        } else if constexpr (std::is_same_v<T, sets::CircleArcs>) {
          return detail::arc_sample(sh, n);
        } else if constexpr (std::is_same_v<T, sets::Julia>) {
          if (sh.c == cplx{}) return sets::circle_sample(n);
          return julia::trace_julia(julia::params(sh.c), detail::next_pow2(n));
        } else if constexpr (std::is_same_v<T, sets::PointCloud>) {
          const bool closed = s.meta.is_quasicircle && s.meta.is_quasicircle->value;
          return sets::make_curve(sh.points, closed);
        } else {
          throw Error("boundary_curve: a union is not a single curve");
        }
      },
      s.shape);
}

/// Points on the outer boundary of every component, about n in total.
/// Union members share the budget in proportion to their boundary length.
inline std::vector<cplx> boundary_points(const SetSpec& s, std::size_t n) {
  if (s.is<sets::PointCloud>()) return s.as<sets::PointCloud>().points;
  if (s.is<sets::CircleArcs>() && !sets::is_full_circle(s.as<sets::CircleArcs>()) &&
      s.as<sets::CircleArcs>().arcs.size() > 1) {
    const auto& a = s.as<sets::CircleArcs>();
    const double total = sets::arc_coverage(a);
    std::vector<cplx> out;
    for (auto [lo, hi] : a.arcs) {
      const auto k = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(n * (hi - lo) / total)));
      auto c = detail::arc_sample(sets::CircleArcs{{{lo, hi}}, a.center, a.radius}, k);
      out.insert(out.end(), c.points.begin(), c.points.end());
    }
    return out;
  }
  if (!s.is<sets::Union>()) return boundary_curve(s, n).points;
  const auto& members = s.as<sets::Union>().members;
  double total = 0.0;
  for (const auto& m : members) total += detail::weight_of(m);
  std::vector<cplx> out;
  for (const auto& m : members) {
    const double w = total > 0 ? detail::weight_of(m) / total : 1.0 / members.size();
    const auto k = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(w * n)));
    auto pts = boundary_points(m, k);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

/// Euclidean distance from z to the set; Julia sets are measured against a
/// 4096-point trace (accurate to the trace spacing).
inline double distance_to(const SetSpec& s, cplx z) {
  return std::visit(
      [&](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, sets::Disk>) {
          return std::max(0.0, std::abs(z - sh.center) - sh.radius);
        } else if constexpr (std::is_same_v<T, sets::Segment>) {
          return sets::distance_to_segment(z, sh.a, sh.b);
        } else if constexpr (std::is_same_v<T, sets::Polyline>) {
          double d = kInf;
          for (std::size_t i = 1; i < sh.points.size(); ++i)
            d = std::min(d, sets::distance_to_segment(z, sh.points[i - 1], sh.points[i]));
          if (sh.closed) d = std::min(d, sets::distance_to_segment(z, sh.points.back(), sh.points.front()));
          return d;
        } else if constexpr (std::is_same_v<T, sets::CircleArcs>) {
          return sets::distance_to_arcs(z, sh);
        } else if constexpr (std::is_same_v<T, sets::Union>) {
          double d = kInf;
          for (const auto& m : sh.members) d = std::min(d, distance_to(m, z));
          return d;
        } else if constexpr (std::is_same_v<T, sets::Julia>) {
          if (sh.c == cplx{}) return std::abs(std::abs(z) - 1.0);
          auto tr = julia::trace_julia(julia::params(sh.c), 4096);
          double d = kInf;
          for (auto p : tr.points) d = std::min(d, std::abs(p - z));
          return d;
        } else {
          double d = kInf;
          for (auto p : sh.points) d = std::min(d, std::abs(p - z));
          return d;
        }
      },
      s.shape);
}

}  // namespace caplab::sampling

#endif  // CAPLAB_SAMPLING_HPP
