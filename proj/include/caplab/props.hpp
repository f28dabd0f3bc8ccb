#ifndef CAPLAB_PROPS_HPP
#define CAPLAB_PROPS_HPP

// Property suites over seeded random inputs. Each check reports how many
// cases it ran, the worst observed error against its tolerance, and the
// first failing case if any.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "core.hpp"
#include "julia.hpp"
#include "menger.hpp"
#include "motion.hpp"
#include "sampling.hpp"
#include "sets.hpp"

namespace caplab::props {

using json = nlohmann::ordered_json;

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  double worst = 0.0;  // largest error seen (check-specific units)
  double tolerance = 0.0;
  std::string failure;  // first failing case
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"closed_forms", "covariance", "monotonicity", "curvature", "julia", "motion"};
  return names;
}

namespace detail {

using Rng = SplitMix64;

inline double uni(Rng& r, double lo, double hi) { return lo + (hi - lo) * uniform01(r); }
inline cplx point(Rng& r, double half) { return {uni(r, -half, half), uni(r, -half, half)}; }

/// Accumulates one check: record(error, ok, description).
class Check {
 public:
  Check(std::string name, double tol) {
    res_.name = std::move(name);
    res_.tolerance = tol;
  }
  void record(double err, const std::string& what) { record(err, err <= res_.tolerance, what); }
  void record(double err, bool ok, const std::string& what) {
    ++res_.cases;
    if (std::isfinite(err)) res_.worst = std::max(res_.worst, err);
    if (!ok && res_.passed) {
      res_.passed = false;
      res_.failure = what + " (error " + format_number(err) + ")";
    }
  }
  void fail(const std::string& what) {
    ++res_.cases;
    if (res_.passed) {
      res_.passed = false;
      res_.failure = what;
    }
  }
  CheckResult result() const { return res_; }

  static std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }

 private:
  CheckResult res_;
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random set of a kind the γ dispatcher handles without Julia traces.
inline sets::SetSpec random_set(Rng& r, int kind) {
  switch (kind % 6) {
    case 0: return sets::disk(point(r, 3), uni(r, 0.1, 2.0));
    case 1: return sets::segment(point(r, 3), point(r, 3));
    case 2: {
      std::vector<cplx> p{point(r, 2)};
      const int n = 3 + static_cast<int>(r() % 4);
      for (int i = 1; i < n; ++i) p.push_back(p.back() + std::polar(uni(r, 0.3, 1.5), uni(r, 0, kTwoPi)));
      return sets::make(sets::Polyline{p, false});
    }
    case 3: {
      const double t = uni(r, 0, kTwoPi);
      return sets::make(sets::CircleArcs{{{t, t + uni(r, 0.3, 6.0)}}, point(r, 2), uni(r, 0.2, 2.0)});
    }
    case 4: {
      // intervals on a random line
      const cplx u = std::polar(1.0, uni(r, 0, kPi)), o = point(r, 2);
      std::vector<sets::SetSpec> m;
      double x = uni(r, -3, -2);
      for (int i = 0; i < 3; ++i) {
        const double a = x + uni(r, 0.1, 0.5), b = a + uni(r, 0.1, 1.0);
        m.push_back(sets::segment(o + a * u, o + b * u));
        x = b;
      }
      return sets::set_union(m);
    }
    default: {
      const cplx c = point(r, 2);
      const double rad = uni(r, 0.2, 1.0);
      return sets::set_union({sets::disk(c, rad), sets::disk(c + std::polar(2 * rad + uni(r, 0.5, 3.0), uni(r, 0, kTwoPi)), uni(r, 0.2, 1.0))});
    }
  }
}

inline double sample_diameter(const sets::SetSpec& s) {
  const auto pts = sampling::boundary_points(s, 4096);
  return sets::diameter(std::span<const cplx>(pts));
}

inline cplx random_cardioid_parameter(Rng& r) {
  // c = w/2 − w²/4 with |w| < 1 lies in the main cardioid
  const cplx w = std::polar(std::sqrt(uni(r, 0.0, 0.9)), uni(r, 0, kTwoPi));
  return w / 2.0 - w * w / 4.0;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> closed_forms(std::uint64_t seed) {
  using namespace capacity;
  std::vector<CheckResult> out;
  {
    Check c("disk_capacity_is_radius", 0.0);
    Rng r(derive_seed(seed, 1));
    for (int t = 0; t < 50; ++t) {
      const double rad = uni(r, 1e-3, 1e3);
      auto e = closed_form_gamma(sets::disk(point(r, 10), rad));
      if (!e || e->kind != Kind::exact) c.fail("disk not resolved exactly");
      else c.record(std::abs(e->value - rad), "radius " + Check::format_number(rad));
    }
    out.push_back(c.result());
  }
  {
    Check c("segment_capacity_is_quarter_length", 1e-15);
    Rng r(derive_seed(seed, 2));
    for (int t = 0; t < 50; ++t) {
      const cplx a = point(r, 10), b = point(r, 10);
      auto e = closed_form_gamma(sets::segment(a, b));
      if (!e || e->kind != Kind::exact) c.fail("segment not resolved exactly");
      else c.record(rel(e->value, std::abs(b - a) / 4.0), "segment");
    }
    out.push_back(c.result());
  }
  {
    // oracle: sort and merge the intervals
    Check c("real_set_capacity_is_quarter_length", 1e-12);
    Rng r(derive_seed(seed, 3));
    for (int t = 0; t < 50; ++t) {
      std::vector<std::pair<double, double>> iv;
      std::vector<sets::SetSpec> m;
      for (int i = 0, k = 1 + t % 6; i < k; ++i) {
        const double a = uni(r, -5, 5), b = a + uni(r, 0.01, 3.0);
        iv.push_back({a, b});
        m.push_back(sets::segment(a, b));
      }
      std::sort(iv.begin(), iv.end());
      double len = 0.0, lo = iv[0].first, hi = iv[0].second;
      for (auto [a, b] : iv) {
        if (a > hi) {
          len += hi - lo;
          lo = a;
        }
        hi = std::max(hi, b);
      }
      len += hi - lo;
      auto e = closed_form_gamma(m.size() == 1 ? m[0] : sets::set_union(m));
      if (!e || e->kind != Kind::exact) c.fail("real set not resolved exactly");
      else c.record(rel(e->value, len / 4.0), std::to_string(m.size()) + " intervals");
    }
    out.push_back(c.result());
  }
  {
    Check c("main_cardioid_julia_capacity_is_one", 0.0);
    Rng r(derive_seed(seed, 4));
    for (int t = 0; t < 30; ++t) {
      const cplx p = random_cardioid_parameter(r);
      if (p == cplx{}) continue;
      auto g = closed_form_gamma(sets::julia(p));
      auto a = alpha_evaluate(sets::julia(p));
      if (!g) c.fail("julia " + format_complex(p) + " not resolved");
      else c.record(std::max(std::abs(g->value - 1.0), std::abs(a.value - 1.0)), "julia " + format_complex(p));
    }
    out.push_back(c.result());
  }
  {
    // the Leja estimate is an independent oracle for R·sin(θ/4)
    Check c("circular_arc_matches_leja", 0.02);
    Rng r(derive_seed(seed, 5));
    for (int t = 0; t < 8; ++t) {
      const double th = uni(r, 0.5, 6.0), rad = uni(r, 0.5, 2.0), t0 = uni(r, 0, kTwoPi);
      auto s = sets::make(sets::CircleArcs{{{t0, t0 + th}}, point(r, 2), rad});
      auto e = closed_form_gamma(s);
      auto pts = sampling::boundary_points(s, 4096);
      const double l = leja_logcap(pts, 256, true).value;
      if (!e) c.fail("arc not resolved");
      else c.record(rel(e->value, l), "arc of angle " + Check::format_number(th));
    }
    out.push_back(c.result());
  }
  {
    Check c("connected_capacity_at_least_quarter_diameter", 0.0);
    Rng r(derive_seed(seed, 6));
    std::vector<sets::SetSpec> sets_;
    for (int t = 0; t < 12; ++t) sets_.push_back(random_set(r, t % 4));
    for (int t = 0; t < 3; ++t) sets_.push_back(sets::julia(random_cardioid_parameter(r)));
    for (const auto& s : sets_) {
      const auto e = gamma_estimate(s);
      const double q = sample_diameter(s) / 4.0;
      // an upper bound cannot witness a lower inequality; skip it
      if (e.kind == Kind::upper_bound) continue;
      // sampled diameters underestimate by at most the spacing
      c.record(std::max(0.0, q - e.value) / q, e.value >= q * (1 - 1e-3), std::string(sets::kind_name(s)) + " via " + e.method);
    }
    out.push_back(c.result());
  }
  return out;
}

inline std::vector<CheckResult> covariance(std::uint64_t seed) {
  using namespace capacity;
  std::vector<CheckResult> out;
  {
    Check c("gamma_affine_covariance", 1e-6);
    Rng r(derive_seed(seed, 11));
    for (int t = 0; t < 20; ++t) {
      auto s = random_set(r, t);
      const cplx a = std::polar(uni(r, 0.3, 3.0), uni(r, 0, kTwoPi)), b = point(r, 5);
      GammaOptions o;
      o.leja_n = 128;
      o.lp.degree = 2;
      const auto e0 = gamma_estimate(s, o);
      const auto e1 = gamma_estimate(sets::affine_image(s, a, b), o);
      c.record(rel(e1.value, std::abs(a) * e0.value), std::string(sets::kind_name(s)) + " via " + e0.method);
    }
    out.push_back(c.result());
  }
  {
    Check c("tolsa_affine_covariance", 1e-6);
    Rng r(derive_seed(seed, 12));
    for (int t = 0; t < 5; ++t) {
      const cplx p = point(r, 2), q = point(r, 2);
      const cplx a = std::polar(uni(r, 0.3, 3.0), uni(r, 0, kTwoPi)), b = point(r, 5);
      auto m = measures::segment_measure(p, q, 100);
      auto mm = measures::pushforward(m, [&](cplx z) { return a * z + b; });
      mm = measures::DiscreteMeasure(mm.atoms(), mm.weights(), std::abs(a) * m.resolution());
      const double v0 = tolsa_lower_bound(sets::segment(p, q), m).value;
      const double v1 = tolsa_lower_bound(sets::segment(a * p + b, a * q + b), mm).value;
      c.record(rel(v1, std::abs(a) * v0), "segment");
    }
    out.push_back(c.result());
  }
  {
    Check c("lp_affine_covariance", 1e-6);
    Rng r(derive_seed(seed, 13));
    lp::Options o;
    o.degree = 2;
    for (int t = 0; t < 3; ++t) {
      const cplx ctr = point(r, 2), pole = ctr + std::polar(uni(r, 0, 0.5), uni(r, 0, kTwoPi));
      const double rad = uni(r, 0.7, 1.5);
      const cplx a = std::polar(uni(r, 0.3, 3.0), uni(r, 0, kTwoPi)), b = point(r, 5);
      const double v0 = lp_capacity(sets::disk(ctr, rad), {pole}, o).value;
      const double v1 = lp_capacity(sets::disk(a * ctr + b, std::abs(a) * rad), {a * pole + b}, o).value;
      c.record(rel(v1, std::abs(a) * v0), "disk");
    }
    out.push_back(c.result());
  }
  return out;
}

inline std::vector<CheckResult> monotonicity(std::uint64_t seed) {
  using namespace capacity;
  std::vector<CheckResult> out;
  {
    // nestings the rules resolve exactly: E ⊂ F ⇒ γ(E) ≤ γ(F)
    Check c("monotone_on_rule_covered_nestings", 0.0);
    Rng r(derive_seed(seed, 21));
    auto compare = [&](const sets::SetSpec& e, const sets::SetSpec& f, const char* what) {
      auto ge = closed_form_gamma(e), gf = closed_form_gamma(f);
      if (!ge || !gf) return c.fail(std::string(what) + ": not rule-covered");
      c.record(std::max(0.0, ge->value - gf->value), what);
    };
    for (int t = 0; t < 40; ++t) {
      const cplx a = point(r, 3), b = point(r, 3);
      const double s0 = uni(r, 0, 1), s1 = uni(r, s0, 1);
      compare(sets::segment(a + s0 * (b - a), a + s1 * (b - a)), sets::segment(a, b), "sub-segment");
      const double rad = uni(r, 0.1, 2.0), inner = uni(r, 0, rad);
      compare(sets::disk(a + std::polar(uni(r, 0, rad - inner), uni(r, 0, kTwoPi)), inner), sets::disk(a, rad), "sub-disk");
      const double t0 = uni(r, 0, kTwoPi), th = uni(r, 0.1, kTwoPi), sub = uni(r, 0, th);
      compare(sets::make(sets::CircleArcs{{{t0, t0 + sub}}, a, rad}), sets::make(sets::CircleArcs{{{t0, t0 + th}}, a, rad}),
              "sub-arc");
      compare(sets::segment(a - rad * 0.5, a + rad * 0.5), sets::disk(a, rad), "segment in disk");
      compare(sets::set_union({sets::segment(-2.0, -1.0), sets::segment(uni(r, 0, 1), 1.5)}),
              sets::set_union({sets::segment(-2.5, -1.0), sets::segment(0.0, 2.0)}), "real intervals");
    }
    out.push_back(c.result());
  }
  {
    Check c("alpha_at_most_gamma", 1e-12);
    Rng r(derive_seed(seed, 22));
    for (int t = 0; t < 24; ++t) {
      auto s = t % 8 == 7 ? sets::julia(random_cardioid_parameter(r)) : random_set(r, t);
      GammaOptions o;
      o.leja_n = 128;
      const auto a = alpha_evaluate(s, o);
      const auto g = gamma_estimate(s, o);
      // interval answers are bounded by construction; compare the exact ones
      if (a.kind != Kind::exact) continue;
      c.record(std::max(0.0, a.value - g.value) / std::max(g.value, 1e-300), std::string(sets::kind_name(s)));
    }
    out.push_back(c.result());
  }
  {
    // finite sets have zero capacity and leave unions unchanged
    Check c("null_set_union_leaves_capacity", 0.0);
    Rng r(derive_seed(seed, 23));
    for (int t = 0; t < 40; ++t) {
      auto s = random_set(r, t % 2 == 0 ? 0 : (t % 4 == 1 ? 1 : 3));
      std::vector<cplx> pts;
      for (int i = 0, k = 1 + t % 5; i < k; ++i) pts.push_back(point(r, 6));
      auto g0 = closed_form_gamma(s);
      auto g1 = closed_form_gamma(sets::set_union({s, sets::cloud(pts)}));
      if (!g0 || !g1) {
        c.fail(std::string(sets::kind_name(s)) + ": not rule-covered");
        continue;
      }
      const double ga = alpha_evaluate(s).value, ga1 = alpha_evaluate(sets::set_union({sets::cloud(pts), s})).value;
      c.record(std::max(std::abs(g0->value - g1->value), std::abs(ga - ga1)), sets::kind_name(s));
    }
    out.push_back(c.result());
  }
  return out;
}

inline std::vector<CheckResult> curvature(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng r(derive_seed(seed, 31));
  {
    // oracle: circumcentre from the perpendicular-bisector linear system
    Check c("menger_matches_circumcircle", 1e-9);
    for (int t = 0; t < 1000; ++t) {
      const cplx x = point(r, 5), y = point(r, 5), z = point(r, 5);
      const cplx u = y - x, v = z - x;
      const double det = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
      if (std::abs(det) < 1e-6) continue;
      const double nu = std::norm(u), nv = std::norm(v);
      const cplx centre{(v.imag() * nu - u.imag() * nv) / det, (u.real() * nv - v.real() * nu) / det};
      c.record(rel(menger::menger_curvature(x, y, z), 1.0 / std::abs(centre)), "random triple");
    }
    out.push_back(c.result());
  }
  {
    Check c("menger_permutation_symmetric", 0.0);
    for (int t = 0; t < 1000; ++t) {
      const cplx x = point(r, 5), y = point(r, 5), z = point(r, 5);
      const double k = menger::menger_curvature(x, y, z);
      double e = 0.0;
      for (double o : {menger::menger_curvature(y, x, z), menger::menger_curvature(z, y, x), menger::menger_curvature(x, z, y),
                       menger::menger_curvature(y, z, x), menger::menger_curvature(z, x, y)})
        e = std::max(e, std::abs(o - k));
      c.record(e, "random triple");
    }
    out.push_back(c.result());
  }
  {
    Check c("menger_collinear_is_zero", 0.0);
    for (int t = 0; t < 1000; ++t) {
      // integer multiples of a dyadic direction stay exactly collinear
      const cplx d{std::ldexp(static_cast<double>(r() % 64) - 32, -4), std::ldexp(static_cast<double>(r() % 64) - 32, -4)};
      const cplx o{std::ldexp(static_cast<double>(r() % 256), -3), std::ldexp(static_cast<double>(r() % 256), -3)};
      const double a = static_cast<double>(r() % 9), b = static_cast<double>(r() % 9) + 10, e = static_cast<double>(r() % 9) + 20;
      c.record(menger::menger_curvature(o + a * d, o + b * d, o + e * d), "collinear triple");
    }
    out.push_back(c.result());
  }
  {
    Check c("menger_scales_inversely", 1e-12);
    for (int t = 0; t < 200; ++t) {
      const cplx x = point(r, 5), y = point(r, 5), z = point(r, 5);
      const double k = uni(r, 0.1, 10);
      const double base = menger::menger_curvature(x, y, z);
      if (base == 0.0) continue;
      c.record(rel(menger::menger_curvature(k * x, k * y, k * z), base / k), "scaled triple");
    }
    out.push_back(c.result());
  }
  {
    Check c("uniform_circle_total_curvature_is_one", 0.02);
    auto m = measures::uniform_on(sets::circle_sample(200).points);
    c.record(std::abs(menger::total_curvature(m) - 1.0), "200 atoms on the unit circle");
    out.push_back(c.result());
  }
  return out;
}

inline std::vector<CheckResult> julia_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng r(derive_seed(seed, 41));
  {
    Check c("boettcher_functional_equation", 1e-8);
    const cplx cs[] = {0.1, 0.2, -0.6, {0.2, 0.1}};
    for (int t = 0; t < 100; ++t) {
      const auto p = julia::params(cs[t % 4]);
      const cplx w = std::polar(uni(r, 1.0 + 1e-3, 3.0), uni(r, 0, kTwoPi));
      c.record(julia::boettcher_residual(p, w), "c = " + format_complex(p.c));
    }
    out.push_back(c.result());
  }
  {
    Check c("boettcher_at_zero_is_identity", 1e-12);
    const auto p = julia::params(0.0);
    for (int t = 0; t < 100; ++t) {
      const cplx w = std::polar(uni(r, 1.0 + 1e-6, 5.0), uni(r, 0, kTwoPi));
      c.record(std::abs(julia::boettcher_map(p, w) - w), "w = " + format_complex(w));
    }
    out.push_back(c.result());
  }
  {
    // oracle: perimeter of the regular 2^d-gon inscribed in |z| = 1 + 2^-20
    Check c("circle_trace_length_is_inscribed_polygon", 1e-9);
    const std::vector<int> depths{6, 7, 8, 9, 10, 11, 12, 13};
    for (const auto& row : julia::length_growth(julia::params(0.0), depths)) {
      const double n = static_cast<double>(row.n_angles);
      const double poly = 2.0 * n * (1.0 + 0x1.0p-20) * std::sin(kPi / n);
      c.record(rel(row.length, poly), "depth " + std::to_string(row.depth));
    }
    out.push_back(c.result());
  }
  {
    Check c("trace_length_increases_with_depth", 0.0);
    const std::vector<int> depths{6, 7, 8, 9, 10, 11, 12, 13};
    for (cplx p : {cplx(0.2), random_cardioid_parameter(r)}) {
      if (std::abs(p) < 0.05) continue;
      const auto rows = julia::length_growth(julia::params(p), depths);
      for (std::size_t i = 1; i < rows.size(); ++i)
        c.record(std::max(0.0, rows[i - 1].length - rows[i].length), rows[i].length > rows[i - 1].length,
                 "c = " + format_complex(p) + " depth " + std::to_string(rows[i].depth));
    }
    out.push_back(c.result());
  }
  {
    Check c("harmonic_samplers_agree", 0.02);
    for (cplx p : {cplx(0.0), cplx(0.2)}) {
      const auto jp = julia::params(p);
      const auto a = julia::harmonic_samples(jp, 10000, derive_seed(seed, 42));
      const auto b = julia::inverse_iteration_samples(jp, 10000, 48, derive_seed(seed, 43));
      c.record(julia::ks_angular(a, b), "c = " + format_complex(p));
    }
    out.push_back(c.result());
  }
  return out;
}

inline std::vector<CheckResult> motion_suite(std::uint64_t seed) {
  using namespace motion;
  std::vector<CheckResult> out;
  Rng r(derive_seed(seed, 51));
  const double eps = 0x1.0p-20;
  auto m = boettcher();
  {
    Check c("identity_at_lambda_zero", 0.0);
    for (int t = 0; t < 200; ++t) {
      const cplx z = std::polar(uni(r, 1.0 + eps, 3.0), uni(r, 0, kTwoPi));
      c.record(std::abs(motion_eval(*m, 0.0, z) - z), "z = " + format_complex(z));
    }
    out.push_back(c.result());
  }
  {
    Check c("injective_in_z", 0.0);
    for (int t = 0; t < 500; ++t) {
      const cplx lam = std::polar(uni(r, 0, 0.95), uni(r, 0, kTwoPi));
      const cplx z1 = std::polar(uni(r, 1.0 + eps, 3.0), uni(r, 0, kTwoPi)), z2 = std::polar(uni(r, 1.0 + eps, 3.0), uni(r, 0, kTwoPi));
      const double d = std::abs(motion_eval(*m, lam, z1) - motion_eval(*m, lam, z2));
      c.record(0.0, d > 0.0, "λ = " + format_complex(lam));
    }
    out.push_back(c.result());
  }
  {
    // finite-difference ∂/∂λ̄
    Check c("holomorphic_in_lambda", 1e-5);
    for (int t = 0; t < 50; ++t) {
      const cplx lam = std::polar(uni(r, 0, 0.8), uni(r, 0, kTwoPi));
      const cplx z = std::polar(uni(r, 1.0 + eps, 2.0), uni(r, 0, kTwoPi));
      const double h = 1e-5;
      const cplx fx = (motion_eval(*m, lam + h, z) - motion_eval(*m, lam - h, z)) / (2 * h);
      const cplx fy = (motion_eval(*m, lam + cplx(0, h), z) - motion_eval(*m, lam - cplx(0, h), z)) / (2 * h);
      c.record(std::abs(0.5 * (fx + cplx(0, 1) * fy)), "λ = " + format_complex(lam));
    }
    out.push_back(c.result());
  }
  {
    Check c("circle_moves_onto_julia_trace", 0.0);
    for (int t = 0; t < 5; ++t) {
      const cplx lam = std::polar(uni(r, 0.1, 0.9), uni(r, 0, kTwoPi));
      const auto moved = move_set(*m, lam, sets::unit_circle(), 256);
      const auto tr = julia::trace_julia(julia::params(lam / 4.0), 256);
      double e = 0.0;
      for (std::size_t i = 0; i < 256; ++i) e = std::max(e, std::abs(moved.points[i] - tr.points[i]));
      c.record(e, "λ = " + format_complex(lam));
    }
    out.push_back(c.result());
  }
  {
    Check c("blaschke_zeros_restore_base", 1e-12);
    for (int t = 0; t < 5; ++t) {
      std::vector<cplx> zeros;
      for (int k = 0; k < 3; ++k) zeros.push_back(std::polar(uni(r, 0, 0.9), uni(r, 0, kTwoPi)));
      auto b = blaschke(m, zeros);
      const cplx w = std::polar(1.0 + eps, uni(r, 0, kTwoPi));
      const cplx zk = motion_eval(*m, blaschke_eval(zeros, 0.0), w);
      for (auto beta : zeros) c.record(std::abs(motion_eval(*b, beta, zk) - w), "β = " + format_complex(beta));
    }
    out.push_back(c.result());
  }
  return out;
}

}  // namespace detail

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  if (name == "closed_forms") rep.checks = detail::closed_forms(seed);
  else if (name == "covariance") rep.checks = detail::covariance(seed);
  else if (name == "monotonicity") rep.checks = detail::monotonicity(seed);
  else if (name == "curvature") rep.checks = detail::curvature(seed);
  else if (name == "julia") rep.checks = detail::julia_suite(seed);
  else if (name == "motion") rep.checks = detail::motion_suite(seed);
  else {
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown property suite \"" + name + "\" (known: " + known + ")");
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Timing is left out so reports are reproducible byte for byte.
inline json to_json(const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json k{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"worst", c.worst}, {"tolerance", c.tolerance}};
    if (!c.passed) k["failure"] = c.failure;
    j["checks"].push_back(k);
  }
  return j;
}

}  // namespace caplab::props

#endif  // CAPLAB_PROPS_HPP
