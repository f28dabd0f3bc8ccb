#ifndef CAPLAB_JULIA_HPP
#define CAPLAB_JULIA_HPP

// Quadratic dynamics z ↦ z² + c: escape times, the Böttcher parametrization
// of the basin of infinity, boundary traces and two independent samplers of
// harmonic measure from infinity.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "measures.hpp"
#include "parallel.hpp"
#include "sets.hpp"

namespace caplab::julia {

using measures::DiscreteMeasure;
using sets::CurveSample;

struct JuliaParams {
  cplx c{0.0, 0.0};
  double escape_radius = 0.0;  // 0 = automatic: max(2, |c| + 1 when |c| > 2)
  int max_iter = 1000;
  double boettcher_blowup = 1e8;
  double trace_offset = 0x1.0p-20;

  /// Copy with the automatic escape radius filled in; throws on invalid fields.
  JuliaParams resolved() const {
    JuliaParams p = *this;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("julia: c must be finite");
    if (p.escape_radius == 0.0) p.escape_radius = std::abs(c) > 2.0 ? std::abs(c) + 1.0 : 2.0;
    if (!(p.escape_radius >= std::max(2.0, std::abs(c)))) throw InputError("julia: escape_radius must be >= max(2, |c|)");
    if (p.max_iter < 1) throw InputError("julia: max_iter must be >= 1");
    if (!(p.boettcher_blowup > 4.0)) throw InputError("julia: boettcher_blowup must exceed 4");
    if (!(p.trace_offset > 0.0) || !(p.trace_offset < 1.0)) throw InputError("julia: trace_offset must lie in (0,1)");
    return p;
  }
};

inline JuliaParams params(cplx c) { return JuliaParams{c}.resolved(); }

/// Attracting fixed point test |1 − √(1 − 4c)| < 1 (principal root).
inline bool in_main_cardioid(cplx c) { return std::abs(1.0 - std::sqrt(1.0 - 4.0 * c)) < 1.0; }

/// First m with |p_c^m(z)| > R, or nullopt if the orbit stays bounded for
/// max_iter steps. Points already outside the escape disk return 0.
inline std::optional<int> escape_time(const JuliaParams& p0, cplx z) {
  const JuliaParams p = p0.resolved();
  const double r2 = p.escape_radius * p.escape_radius;
  for (int m = 0; m <= p.max_iter; ++m) {
    if (std::norm(z) > r2) return m;
    z = z * z + p.c;
  }
  return std::nullopt;
}

/// Inverse Böttcher map B_c : {|w| > 1} → basin of ∞, normalized so that
/// B_c(w) = w + O(1/w) and B_c(w)² + c = B_c(w²).
inline cplx boettcher_map(const JuliaParams& p0, cplx w) {
  const JuliaParams p = p0.resolved();
  const double r = std::abs(w);
  if (!(r >= (1.0 + p.trace_offset) * (1.0 - 1e-15)))
    throw Error("boettcher_map: |w| = " + std::to_string(r) + " is inside the trace radius 1 + " +
                std::to_string(p.trace_offset));
  // smallest N with |w|^(2^N) > blowup
  int n = 0;
  for (double lr = std::log(r), target = std::log(p.boettcher_blowup); lr <= target; lr *= 2.0) {
    if (++n > 62)
      throw Error("boettcher_map: |w| too close to 1 for the blowup budget; use a trace offset of at least 1e-15");
  }
  std::vector<cplx> ref(n + 1);
  ref[0] = w;
  for (int k = 1; k <= n; ++k) ref[k] = ref[k - 1] * ref[k - 1];
  cplx z = ref[n];
  for (int k = n; k >= 1; --k) {
    const cplx s = std::sqrt(z - p.c);
    const double d_plus = std::abs(s - ref[k - 1]);
    const double d_minus = std::abs(-s - ref[k - 1]);
    const double near = std::min(d_plus, d_minus), far = std::max(d_plus, d_minus);
    if (far - near < 0.25 * (far + near))
      throw Error("boettcher_map: square-root branch is ambiguous at level " + std::to_string(k) + " for w = " +
                  format_complex(w) + "; increase the trace offset");
    z = d_plus <= d_minus ? s : -s;
  }
  return z;
}

/// Böttcher coordinate φ_c = B_c⁻¹ on the basin of ∞, from the product
/// φ_c(z) = z Π_k (1 + c/z_k²)^{1/2^{k+1}}, z_k = p_c^k(z), with principal
/// roots. Needs |z_k|² > |c| along the orbit, which holds near J_c for c
/// in the main cardioid with |c| < 1/4.
inline cplx boettcher_coordinate(const JuliaParams& p0, cplx z) {
  const JuliaParams p = p0.resolved();
  cplx w = z;
  cplx zk = z;
  double expo = 0.5;
  for (int k = 0; k < 200; ++k) {
    if (std::abs(zk) > p.boettcher_blowup) return w;
    const cplx q = p.c / (zk * zk);
    if (!(std::abs(q) < 1.0))
      throw Error("boettcher_coordinate: orbit of " + format_complex(z) + " comes too close to 0 for the product formula");
    w *= std::pow(1.0 + q, expo);
    zk = zk * zk + p.c;
    expo *= 0.5;
  }
  throw Error("boettcher_coordinate: " + format_complex(z) + " does not escape; it is not in the basin of infinity");
}

/// |B_c(w)² + c − B_c(w²)|.
inline double boettcher_residual(const JuliaParams& p, cplx w) {
  const cplx b = boettcher_map(p, w);
  return std::abs(b * b + p.c - boettcher_map(p, w * w));
}

namespace detail {

inline void require_cardioid(const JuliaParams& p, const char* what) {
  if (!in_main_cardioid(p.c))
    throw Error(std::string(what) + ": c = " + format_complex(p.c) +
                " is outside the main cardioid; only quasicircle Julia sets are traced");
}

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace detail

/// B_c((1+ε)e^{2πik/n}), k = 0..n−1, with external angles k/n (in turns) as
/// params. Angles are exact dyadic fractions, so the n-point trace is a
/// subsequence of the 2n-point trace.
inline CurveSample trace_julia(const JuliaParams& p0, std::size_t n_angles) {
  const JuliaParams p = p0.resolved();
  detail::require_cardioid(p, "trace_julia");
  if (!detail::is_power_of_two(n_angles) || n_angles < 2) throw Error("trace_julia: n_angles must be a power of two >= 2");
  CurveSample s;
  s.points.resize(n_angles);
  s.params.resize(n_angles);
  s.closed = true;
  s.trace_offset = p.trace_offset;
  const double radius = 1.0 + p.trace_offset;
  parallel_for(n_angles, [&](std::size_t k) {
    const double t = static_cast<double>(k) / static_cast<double>(n_angles);
    s.params[k] = t;
    s.points[k] = boettcher_map(p, std::polar(radius, kTwoPi * t));
  });
  return s;
}

/// Discretized harmonic measure from ∞: n uniform external angles pushed
/// through w ↦ B_c((1+ε)e^{iθ}), weights 1/n. Sample j uses its own
/// generator seeded from (seed, j).
inline DiscreteMeasure harmonic_samples(const JuliaParams& p0, std::size_t n, std::uint64_t seed) {
  const JuliaParams p = p0.resolved();
  detail::require_cardioid(p, "harmonic_samples");
  if (n == 0) throw Error("harmonic_samples: n must be positive");
  std::vector<cplx> z(n);
  const double radius = 1.0 + p.trace_offset;
  parallel_for(n, [&](std::size_t j) {
    SplitMix64 rng(derive_seed(seed, j));
    z[j] = boettcher_map(p, std::polar(radius, kTwoPi * uniform01(rng)));
  });
  return DiscreteMeasure(std::move(z), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

/// Repelling fixed point (1 + √(1 − 4c))/2, a point of J_c for c ∈ M.
inline cplx beta_fixed_point(cplx c) { return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * c)); }

/// n independent random backward orbits of length `depth` started at the
/// repelling fixed point; only the endpoint of each orbit is kept (the
/// earlier steps are burn-in). For c ∈ M the endpoints equidistribute
/// towards harmonic measure from ∞ as depth grows.
inline DiscreteMeasure inverse_iteration_samples(const JuliaParams& p0, std::size_t n, int depth, std::uint64_t seed) {
  const JuliaParams p = p0.resolved();
  if (n == 0) throw Error("inverse_iteration_samples: n must be positive");
  if (depth < 1) throw Error("inverse_iteration_samples: depth must be >= 1");
  if (escape_time(p, 0.0).has_value())
    throw Error("inverse_iteration_samples: the critical orbit escapes, c is outside the Mandelbrot set");
  const cplx start = beta_fixed_point(p.c);
  std::vector<cplx> z(n);
  parallel_for(n, [&](std::size_t j) {
    SplitMix64 rng(derive_seed(seed ^ 0xA5A5A5A5DEADBEEFULL, j));
    cplx x = start;
    std::uint64_t bits = 0;
    for (int d = 0; d < depth; ++d) {
      if (d % 64 == 0) bits = rng();
      const cplx s = std::sqrt(x - p.c);
      x = (bits & 1) ? -s : s;
      bits >>= 1;
    }
    z[j] = x;
  });
  return DiscreteMeasure(std::move(z), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

struct LengthRow {
  int depth = 0;
  std::size_t n_angles = 0;
  double length = 0.0;
};

/// Discrete length of the 2^d-point trace for each requested depth. The
/// finest trace is computed once and subsampled (traces are nested).
inline std::vector<LengthRow> length_growth(const JuliaParams& p, std::span<const int> depths) {
  if (depths.empty()) throw Error("length_growth: no depths");
  int dmax = 0;
  for (int d : depths) {
    if (d < 2 || d > 24) throw Error("length_growth: depths must lie in [2, 24]");
    dmax = std::max(dmax, d);
  }
  const CurveSample fine = trace_julia(p, std::size_t{1} << dmax);
  std::vector<LengthRow> rows;
  for (int d : depths) {
    const std::size_t n = std::size_t{1} << d, stride = fine.size() / n;
    double len = 0.0;
    for (std::size_t k = 0; k < n; ++k) len += std::abs(fine.points[((k + 1) % n) * stride] - fine.points[k * stride]);
    rows.push_back({d, n, len});
  }
  return rows;
}

struct BoxScale {
  double delta = 0.0;
  std::size_t boxes = 0;
  bool resolved = false;
};

struct BoxDimension {
  double dimension = 0.0;
  double r_squared = 0.0;
  std::vector<BoxScale> scales;
  std::size_t resolved_count = 0;
};

/// Least-squares slope of log N(δ) against log(1/δ). A scale counts only if
/// δ ≤ diam/2 and N(δ) ≤ n/8 (so boxes are not mostly single samples).
inline BoxDimension box_dimension(std::span<const cplx> pts, std::span<const double> scales) {
  if (pts.size() < 1000) throw Error("box_dimension: need at least 1000 points");
  const double diam = sets::diameter(pts);
  double xmin = kInf, ymin = kInf;
  for (auto z : pts) {
    xmin = std::min(xmin, z.real());
    ymin = std::min(ymin, z.imag());
  }
  BoxDimension out;
  std::vector<double> xs, ys;
  for (double delta : scales) {
    if (!(delta > 0.0)) throw Error("box_dimension: scales must be positive");
    std::unordered_set<std::uint64_t> boxes;
    for (auto z : pts) {
      const auto i = static_cast<std::uint64_t>(std::floor((z.real() - xmin) / delta));
      const auto j = static_cast<std::uint64_t>(std::floor((z.imag() - ymin) / delta));
      boxes.insert((i << 32) ^ j);
    }
    BoxScale s{delta, boxes.size(), false};
    s.resolved = delta <= diam / 2 && s.boxes * 8 <= pts.size();
    if (s.resolved) {
      xs.push_back(std::log(1.0 / delta));
      ys.push_back(std::log(static_cast<double>(s.boxes)));
    }
    out.scales.push_back(s);
  }
  out.resolved_count = xs.size();
  if (xs.size() < 3)
    throw Error("box_dimension: only " + std::to_string(xs.size()) + " resolved scales (need 3); add coarser scales or more points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  out.dimension = sxy / sxx;
  out.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return out;
}

/// Two-sample Kolmogorov–Smirnov statistic of the angular coordinates arg z.
inline double ks_angular(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  auto angles = [](const DiscreteMeasure& m) {
    std::vector<std::pair<double, double>> v;
    for (std::size_t i = 0; i < m.size(); ++i) v.push_back({std::arg(m.atoms()[i]), m.weights()[i]});
    std::sort(v.begin(), v.end());
    const double tot = measures::total_mass(m);
    for (auto& e : v) e.second /= tot;
    return v;
  };
  const auto x = angles(a), y = angles(b);
  std::size_t i = 0, j = 0;
  double fx = 0, fy = 0, d = 0;
  while (i < x.size() || j < y.size()) {
    const double t = std::min(i < x.size() ? x[i].first : kInf, j < y.size() ? y[j].first : kInf);
    while (i < x.size() && x[i].first == t) fx += x[i++].second;
    while (j < y.size() && y[j].first == t) fy += y[j++].second;
    d = std::max(d, std::abs(fx - fy));
  }
  return d;
}

}  // namespace caplab::julia

#endif  // CAPLAB_JULIA_HPP
