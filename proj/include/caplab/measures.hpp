#ifndef CAPLAB_MEASURES_HPP
#define CAPLAB_MEASURES_HPP

// Finite positive measures: weighted atoms, optionally smeared over a cell
// of width `resolution` so that discretized length measures have the
// densities of the measures they approximate.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace caplab::measures {

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Atoms are sorted lexicographically and exact duplicates merged, so two
  /// measures with the same atoms compare equal regardless of input order.
  /// resolution = 0 gives pure point masses; resolution ρ > 0 spreads each
  /// atom uniformly over a radial window of width ρ when balls are measured.
  DiscreteMeasure(std::vector<cplx> atoms, std::vector<double> weights, double resolution = 0.0)
      : resolution_(resolution) {
    if (atoms.size() != weights.size()) throw InputError("measure: atoms/weights length mismatch");
    if (!(resolution >= 0.0) || !std::isfinite(resolution)) throw InputError("measure: resolution must be >= 0");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (!std::isfinite(atoms[i].real()) || !std::isfinite(atoms[i].imag()))
        throw InputError("measure: non-finite atom");
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw InputError("measure: weights must be positive");
    }
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lex_less(atoms[a], atoms[b]); });
    for (auto i : order) {
      if (!atoms_.empty() && atoms_.back() == atoms[i]) {
        weights_.back() += weights[i];
      } else {
        atoms_.push_back(atoms[i]);
        weights_.push_back(weights[i]);
      }
    }
  }

  static bool lex_less(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  }

  const std::vector<cplx>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  bool operator==(const DiscreteMeasure&) const = default;

 private:
  std::vector<cplx> atoms_;
  std::vector<double> weights_;
  double resolution_ = 0.0;
};

inline double total_mass(const DiscreteMeasure& m) {
  double s = 0.0;
  for (double w : m.weights()) s += w;
  return s;
}

inline DiscreteMeasure scaled(const DiscreteMeasure& m, double t) {
  if (!(t > 0.0)) throw Error("scaled: factor must be positive");
  std::vector<double> w = m.weights();
  for (auto& x : w) x *= t;
  return DiscreteMeasure(m.atoms(), std::move(w), m.resolution());
}

namespace detail {

/// Fraction of a radial window [d − ρ/2, d + ρ/2] inside (−r, r).
inline double covered_fraction(double d, double r, double rho) {
  if (rho == 0.0) return d < r ? 1.0 : 0.0;
  const double lo = std::max(-r, d - 0.5 * rho);
  const double hi = std::min(r, d + 0.5 * rho);
  return std::clamp((hi - lo) / rho, 0.0, 1.0);
}

}  // namespace detail

/// μ(B(x, r)) for the open ball.
inline double ball_mass(const DiscreteMeasure& m, cplx x, double r) {
  if (!(r > 0.0)) throw Error("ball_mass: radius must be positive");
  const double rho = m.resolution();
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = std::abs(m.atoms()[i] - x);
    if (d - 0.5 * rho >= r) continue;
    s += m.weights()[i] * detail::covered_fraction(d, r, rho);
  }
  return s;
}

/// sup_{r>0} μ(B(x,r))/r, evaluated exactly: r ↦ μ(B(x,r)) is piecewise
/// linear (or a step function when ρ = 0), so the supremum sits at a
/// breakpoint, a right limit at a jump, or the r → 0⁺ slope.
/// Returns +∞ iff a pure atom sits at x.
inline double maximal_function(const DiscreteMeasure& m, cplx x) {
  const double rho = m.resolution();
  struct Event {
    double r;
    double slope;
    double jump;
  };
  std::vector<Event> ev;
  ev.reserve(3 * m.size());
  double slope = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double d = std::abs(m.atoms()[i] - x);
    const double w = m.weights()[i];
    if (rho == 0.0) {
      if (d == 0.0) return kInf;
      ev.push_back({d, 0.0, w});
      continue;
    }
    const double k = w / rho;
    const double h = 0.5 * rho;
    // x on a cell edge: keep rounding (which scales with the coordinates,
    // not with ρ) from faking a straddle
    const double tol = 1e-12 * h + 16 * std::numeric_limits<double>::epsilon() * (std::abs(x) + std::abs(m.atoms()[i]));
    if (std::abs(d - h) <= tol) d = h;
    if (d >= h) {
      ev.push_back({d - h, k, 0.0});
      ev.push_back({d + h, -k, 0.0});
    } else {
      slope += 2.0 * k;  // window straddles x: both ends of (−r, r) eat into it
      ev.push_back({h - d, -k, 0.0});
      ev.push_back({h + d, -k, 0.0});
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.r < b.r; });
  double best = slope;  // lim_{r→0+} F(r)/r
  double F = 0.0, r = 0.0;
  for (std::size_t i = 0; i < ev.size();) {
    const double rn = ev[i].r;
    F += slope * (rn - r);
    r = rn;
    for (; i < ev.size() && ev[i].r == rn; ++i) {
      slope += ev[i].slope;
      F += ev[i].jump;
    }
    if (r > 0.0)
      best = std::max(best, F / r);
    else
      best = std::max(best, slope);
  }
  return best;
}

struct DensityRow {
  double r = 0.0;
  double ratio = 0.0;
};

/// Ratios μ(B(x,r))/r on a decreasing grid. Both Θ and Θ* are grid-limited:
/// Θ is the ratio at the smallest radius, Θ* the largest ratio seen.
struct DensityTable {
  std::vector<DensityRow> rows;
  double theta = 0.0;
  double theta_upper = 0.0;
  bool divergent = false;  // a pure atom sits at x, so the true ratios blow up
  std::string note = "grid-limited";
};

inline DensityTable linear_density(const DiscreteMeasure& m, cplx x, std::span<const double> r_grid) {
  if (r_grid.empty()) throw Error("linear_density: empty radius grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw Error("linear_density: radii must be positive");
    if (i > 0 && !(r_grid[i] < r_grid[i - 1])) throw Error("linear_density: radii must be decreasing");
  }
  DensityTable t;
  for (double r : r_grid) {
    const double q = ball_mass(m, x, r) / r;
    t.rows.push_back({r, q});
    t.theta_upper = std::max(t.theta_upper, q);
  }
  t.theta = t.rows.back().ratio;
  if (m.resolution() == 0.0)
    for (auto a : m.atoms())
      if (a == x) t.divergent = true;
  return t;
}

/// Image measure under `map`; weights are kept, coincident images merged.
inline DiscreteMeasure pushforward(const DiscreteMeasure& m, const std::function<cplx(cplx)>& map) {
  std::vector<cplx> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const cplx a = m.atoms()[i];
    try {
      out[i] = map(a);
    } catch (const std::exception& e) {
      throw Error("pushforward: map failed at atom " + format_complex(a) + ": " + e.what());
    }
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
      throw Error("pushforward: map is not finite at atom " + format_complex(a));
  }
  return DiscreteMeasure(std::move(out), m.weights(), m.resolution());
}

/// n equal cells on [a, b] carrying total mass `mass`, each atom smeared over
/// its own cell, i.e. a discretization of (mass/|b−a|)·H¹ restricted to [a,b].
inline DiscreteMeasure segment_measure(cplx a, cplx b, std::size_t n, double mass = 1.0) {
  if (n == 0) throw Error("segment_measure: n must be positive");
  std::vector<cplx> z(n);
  std::vector<double> w(n, mass / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) z[k] = a + (b - a) * ((static_cast<double>(k) + 0.5) / static_cast<double>(n));
  return DiscreteMeasure(std::move(z), std::move(w), std::abs(b - a) / static_cast<double>(n));
}

/// Equal point masses on the given points.
inline DiscreteMeasure uniform_on(std::span<const cplx> pts, double mass = 1.0) {
  if (pts.empty()) throw Error("uniform_on: no points");
  return DiscreteMeasure({pts.begin(), pts.end()}, std::vector<double>(pts.size(), mass / static_cast<double>(pts.size())));
}

}  // namespace caplab::measures

#endif  // CAPLAB_MEASURES_HPP
