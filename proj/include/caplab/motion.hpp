#ifndef CAPLAB_MOTION_HPP
#define CAPLAB_MOTION_HPP

// Holomorphic motions: the Böttcher motion h(λ,z) = B_{λ/4}(z), unions of
// a translated motion with another, and reparametrization by a finite
// Blaschke product. Scans tabulate capacity observables along a λ path.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "capacity.hpp"
#include "core.hpp"
#include "julia.hpp"
#include "sampling.hpp"
#include "sets.hpp"

namespace caplab::motion {

using sets::CurveSample;
using sets::SetSpec;

struct MotionSpec;
using MotionPtr = std::shared_ptr<const MotionSpec>;

struct IdentityMotion {};

/// Moves the closed exterior of the (1+ε)-circle; interior points are out
/// of the domain (the interior extension is not constructive).
struct BoettcherMotion {
  double trace_offset = 0x1.0p-20;
};

/// (E + d) ∪ F moved by h_E on the translated piece and h_F on the other.
/// A point belongs to the translated piece when it is nearer to d than to 0.
struct TranslateUnionMotion {
  MotionPtr e, f;
  cplx d;
};

/// g(λ, ·) = g'(b(λ), ·) on the base set K = K'_{b(0)}.
struct BlaschkeMotion {
  MotionPtr inner;
  std::vector<cplx> zeros;
};

struct MotionSpec {
  std::variant<IdentityMotion, BoettcherMotion, TranslateUnionMotion, BlaschkeMotion> v;
};

inline const char* kind_name(const MotionSpec& m) {
  static constexpr const char* names[] = {"identity", "boettcher", "translate_union", "blaschke"};
  return names[m.v.index()];
}

// ---------------------------------------------------------------------------
// Blaschke products

inline void check_zeros(const std::vector<cplx>& zeros) {
  for (auto b : zeros)
    if (!(std::abs(b) < 1.0)) throw InputError("blaschke: zero " + format_complex(b) + " is not inside the unit disk");
}

/// Π (−|β|/β)(z − β)/(1 − β̄z), with the plain factor z for β = 0. An exact
/// zero of the product is returned as +0.
inline cplx blaschke_eval(const std::vector<cplx>& zeros, cplx z) {
  check_zeros(zeros);
  if (!(std::abs(z) < 1.0)) throw InputError("blaschke: |z| must be < 1, got " + format_complex(z));
  cplx b = 1.0;
  for (auto beta : zeros) {
    if (beta == cplx{}) {
      b *= z;
    } else {
      b *= (-std::abs(beta) / beta) * (z - beta) / (1.0 - std::conj(beta) * z);
    }
  }
  if (b == cplx{}) b = cplx{0.0, 0.0};  // drop signed zeros
  return b;
}

// ---------------------------------------------------------------------------
// Construction

inline MotionPtr identity() { return std::make_shared<MotionSpec>(MotionSpec{IdentityMotion{}}); }
inline MotionPtr boettcher(double trace_offset = 0x1.0p-20) {
  if (!(trace_offset > 0.0 && trace_offset < 1.0)) throw InputError("boettcher motion: trace offset must lie in (0,1)");
  return std::make_shared<MotionSpec>(MotionSpec{BoettcherMotion{trace_offset}});
}
inline MotionPtr translate_union(MotionPtr e, MotionPtr f, cplx d) {
  if (!e || !f) throw InputError("translate_union: missing base motion");
  if (d == cplx{}) throw InputError("translate_union: offset must be non-zero");
  return std::make_shared<MotionSpec>(MotionSpec{TranslateUnionMotion{std::move(e), std::move(f), d}});
}
inline MotionPtr blaschke(MotionPtr inner, std::vector<cplx> zeros) {
  if (!inner) throw InputError("blaschke motion: missing inner motion");
  if (zeros.empty()) throw InputError("blaschke motion: no zeros");
  check_zeros(zeros);
  return std::make_shared<MotionSpec>(MotionSpec{BlaschkeMotion{std::move(inner), std::move(zeros)}});
}

// ---------------------------------------------------------------------------
// Pointwise evaluation

namespace detail {

inline void check_lambda(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw InputError("motion: |lambda| must be < 1, got " + format_complex(lambda));
}

inline bool in_translated_piece(const TranslateUnionMotion& t, cplx z) { return std::abs(z - t.d) < std::abs(z); }

inline void check_boettcher_domain(const BoettcherMotion& b, cplx z) {
  if (!(std::abs(z) >= (1.0 + b.trace_offset) * (1.0 - 1e-15)))
    throw Error("boettcher motion: " + format_complex(z) + " is inside the (1+eps)-circle, outside the motion's domain");
}

inline julia::JuliaParams boettcher_params(const BoettcherMotion& b, cplx lambda) {
  julia::JuliaParams p{lambda / 4.0};
  p.trace_offset = b.trace_offset;
  return p.resolved();
}

}  // namespace detail

/// h_λ(z). λ = 0 returns z exactly for every variant.
inline cplx motion_eval(const MotionSpec& m, cplx lambda, cplx z);

/// h_λ⁻¹(z) for z in the image of the domain.
inline cplx motion_inverse(const MotionSpec& m, cplx lambda, cplx z) {
  detail::check_lambda(lambda);
  return std::visit(
      [&](const auto& x) -> cplx {
        using T = std::decay_t<decltype(x)>;
        if (lambda == cplx{}) return z;
        if constexpr (std::is_same_v<T, IdentityMotion>) {
          return z;
        } else if constexpr (std::is_same_v<T, BoettcherMotion>) {
          return julia::boettcher_coordinate(detail::boettcher_params(x, lambda), z);
        } else if constexpr (std::is_same_v<T, TranslateUnionMotion>) {
          if (detail::in_translated_piece(x, z)) return motion_inverse(*x.e, lambda, z - x.d) + x.d;
          return motion_inverse(*x.f, lambda, z);
        } else {
          const cplx b0 = blaschke_eval(x.zeros, 0.0);
          return motion_eval(*x.inner, b0, motion_inverse(*x.inner, blaschke_eval(x.zeros, lambda), z));
        }
      },
      m.v);
}

inline cplx motion_eval(const MotionSpec& m, cplx lambda, cplx z) {
  detail::check_lambda(lambda);
  return std::visit(
      [&](const auto& x) -> cplx {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IdentityMotion>) {
          return z;
        } else if constexpr (std::is_same_v<T, BoettcherMotion>) {
          detail::check_boettcher_domain(x, z);
          if (lambda == cplx{}) return z;
          return julia::boettcher_map(detail::boettcher_params(x, lambda), z);
        } else if constexpr (std::is_same_v<T, TranslateUnionMotion>) {
          if (detail::in_translated_piece(x, z)) return motion_eval(*x.e, lambda, z - x.d) + x.d;
          return motion_eval(*x.f, lambda, z);
        } else {
          if (lambda == cplx{}) return z;
          // z is a point of K = K'_{b(0)}: pull back to K', then move to b(λ)
          const cplx b0 = blaschke_eval(x.zeros, 0.0);
          return motion_eval(*x.inner, blaschke_eval(x.zeros, lambda), motion_inverse(*x.inner, b0, z));
        }
      },
      m.v);
}

// ---------------------------------------------------------------------------
// Moving sets

/// Sample of a base set that lies in the motion's domain: circles and arcs
/// about 0 of radius 1 are lifted to radius 1+ε for the Böttcher motion.
/// Unions under a translate-union motion must be {E + d, F}.
inline CurveSample domain_sample(const MotionSpec& m, const SetSpec& s, std::size_t n);

namespace detail {

inline bool unit_circle_arcs(const SetSpec& s) {
  if (s.is<sets::Julia>()) return s.as<sets::Julia>().c == cplx{};
  return s.is<sets::CircleArcs>() && s.as<sets::CircleArcs>().center == cplx{} && s.as<sets::CircleArcs>().radius == 1.0;
}

inline CurveSample concat(const CurveSample& a, const CurveSample& b) {
  std::vector<cplx> pts = a.points;
  pts.insert(pts.end(), b.points.begin(), b.points.end());
  return sets::make_curve(std::move(pts), false);
}

inline CurveSample shifted(CurveSample c, cplx d) {
  for (auto& z : c.points) z += d;
  return c;
}

}  // namespace detail

inline CurveSample domain_sample(const MotionSpec& m, const SetSpec& s, std::size_t n) {
  return std::visit(
      [&](const auto& x) -> CurveSample {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IdentityMotion>) {
          if (s.is<sets::Union>() || (s.is<sets::CircleArcs>() && s.as<sets::CircleArcs>().arcs.size() > 1))
            return sets::make_curve(sampling::boundary_points(s, n), false);
          return sampling::boundary_curve(s, n);
        } else if constexpr (std::is_same_v<T, BoettcherMotion>) {
          if (detail::unit_circle_arcs(s)) {
            sets::CircleArcs a = s.is<sets::Julia>() ? sets::CircleArcs{{{0.0, kTwoPi}}} : s.as<sets::CircleArcs>();
            a.radius = 1.0 + x.trace_offset;
            auto c = domain_sample(*identity(), sets::make(a), n);
            c.trace_offset = x.trace_offset;
            return c;
          }
          auto c = domain_sample(*identity(), s, n);
          for (auto z : c.points) detail::check_boettcher_domain(x, z);
          return c;
        } else if constexpr (std::is_same_v<T, TranslateUnionMotion>) {
          if (!s.is<sets::Union>() || s.as<sets::Union>().members.size() != 2)
            throw InputError("translate_union motion: the set must be a union {E + d, F}");
          const auto& mem = s.as<sets::Union>().members;
          auto e = detail::shifted(domain_sample(*x.e, sets::affine_image(mem[0], 1.0, -x.d), n / 2), x.d);
          auto f = domain_sample(*x.f, mem[1], n - n / 2);
          for (auto z : e.points)
            if (!detail::in_translated_piece(x, z)) throw InputError("translate_union motion: E + d must lie nearer to d than to 0");
          for (auto z : f.points)
            if (detail::in_translated_piece(x, z)) throw InputError("translate_union motion: F must lie nearer to 0 than to d");
          return detail::concat(e, f);
        } else {
          // the base set of the reparametrized motion is K'_{b(0)}
          return domain_sample(*x.inner, s, n);
        }
      },
      m.v);
}

/// Image of the base sample under h_λ, params preserved.
inline CurveSample move_sample(const MotionSpec& m, cplx lambda, const CurveSample& base) {
  detail::check_lambda(lambda);
  if (lambda == cplx{}) return base;
  if (const auto* b = std::get_if<BlaschkeMotion>(&m.v)) {
    // base is a sample of K'; K_λ = K'_{b(λ)}
    return move_sample(*b->inner, blaschke_eval(b->zeros, lambda), base);
  }
  CurveSample out = base;
  parallel_for(base.size(), [&](std::size_t i) { out.points[i] = motion_eval(m, lambda, base.points[i]); }, 64);
  if (std::holds_alternative<BoettcherMotion>(m.v)) out.trace_offset = base.trace_offset;
  return out;
}

/// E_λ sampled with n points. For a reparametrized motion the set is read
/// as the inner base set K' and E_λ = K'_{b(λ)}.
inline CurveSample move_set(const MotionSpec& m, cplx lambda, const SetSpec& s, std::size_t n) {
  return move_sample(m, lambda, domain_sample(m, s, n));
}

/// Closed-form description of E_λ when one is available.
inline std::optional<SetSpec> image_spec(const MotionSpec& m, cplx lambda, const SetSpec& s) {
  detail::check_lambda(lambda);
  if (const auto* b = std::get_if<BlaschkeMotion>(&m.v)) return image_spec(*b->inner, blaschke_eval(b->zeros, lambda), s);
  if (lambda == cplx{}) return s;
  if (std::holds_alternative<IdentityMotion>(m.v)) return s;
  if (std::holds_alternative<BoettcherMotion>(m.v) && detail::unit_circle_arcs(s)) {
    const bool full = s.is<sets::Julia>() || sets::is_full_circle(s.as<sets::CircleArcs>());
    if (full) return sets::julia(lambda / 4.0);
  }
  return std::nullopt;
}

struct DisjointnessRecord {
  double lambda_radius = 0.0;
  std::size_t grid_points = 0;
  double min_distance = kInf;
  cplx worst_lambda;
};

/// Minimum distance between the moved pieces E_λ + d and F_λ over a polar
/// λ grid (radii k/rings·radius, `spokes` angles, plus λ = 0).
inline DisjointnessRecord check_translate_disjoint(const MotionSpec& m, const SetSpec& s, double lambda_radius,
                                                   int rings = 4, int spokes = 8, std::size_t n = 256) {
  const auto* t = std::get_if<TranslateUnionMotion>(&m.v);
  if (!t) throw InputError("disjointness check needs a translate_union motion");
  if (!(lambda_radius > 0.0 && lambda_radius < 1.0)) throw InputError("disjointness check: lambda radius must lie in (0,1)");
  const auto& mem = s.as<sets::Union>().members;
  const auto e0 = detail::shifted(domain_sample(*t->e, sets::affine_image(mem.at(0), 1.0, -t->d), n), t->d);
  const auto f0 = domain_sample(*t->f, mem.at(1), n);
  std::vector<cplx> grid{0.0};
  for (int r = 1; r <= rings; ++r)
    for (int k = 0; k < spokes; ++k) grid.push_back(std::polar(lambda_radius * r / rings, kTwoPi * k / spokes));
  DisjointnessRecord rec;
  rec.lambda_radius = lambda_radius;
  rec.grid_points = grid.size();
  for (auto lam : grid) {
    const auto e = move_sample(m, lam, e0);
    const auto f = move_sample(m, lam, f0);
    for (auto a : e.points)
      for (auto b : f.points)
        if (std::abs(a - b) < rec.min_distance) {
          rec.min_distance = std::abs(a - b);
          rec.worst_lambda = lam;
        }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Scans

struct ScanRow {
  cplx lambda;
  std::string observable;
  std::optional<double> value;
  std::string kind;
  std::string notes;
};

struct ScanOptions {
  std::size_t leja_n = 256;
  std::size_t sample_n = 4096;
  std::vector<int> length_depths{8, 10, 12};
  int box_depth = 14;
  std::vector<double> box_scales;  // empty = 2^-2 .. 2^-9
};

inline const std::vector<std::string>& observable_names() {
  static const std::vector<std::string> names{"gamma_leja", "gamma_rules", "alpha_rules", "length", "box_dim"};
  return names;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Rows for one λ of a motion that is not a reparametrization. `shown` is
/// the λ written to the table.
inline std::vector<ScanRow> scan_rows(const MotionSpec& m, const SetSpec& s, cplx lambda, cplx shown,
                                      const std::vector<std::string>& obs, const ScanOptions& opt) {
  std::vector<ScanRow> rows;
  const auto base_meta = capacity::derive_meta(s);
  const bool connected = base_meta.is_connected && base_meta.is_connected->value;
  const auto image = image_spec(m, lambda, s);

  auto moved_cloud = [&](const CurveSample& c) {
    SetSpec cloud = sets::cloud(c.points);
    if (connected) cloud.meta.is_connected = sets::Flag{true, "homeomorphic image of a connected set"};
    return cloud;
  };
  auto push = [&](const std::string& name, auto&& body) {
    ScanRow r;
    r.lambda = shown;
    r.observable = name;
    try {
      body(r);
    } catch (const std::exception& e) {
      r.value.reset();
      r.kind = "error";
      r.notes = e.what();
    }
    rows.push_back(std::move(r));
  };

  for (const auto& o : obs) {
    if (o == "gamma_leja") {
      push(o, [&](ScanRow& r) {
        const auto c = move_set(m, lambda, s, opt.sample_n);
        const auto e = capacity::leja_logcap(c.points, std::min(opt.leja_n, c.size() - 1), connected);
        r.value = e.value;
        r.kind = capacity::kind_name(e.kind);
        r.notes = "leja n=" + std::to_string(opt.leja_n) + " on " + std::to_string(c.size()) + " moved points";
      });
    } else if (o == "gamma_rules" || o == "alpha_rules") {
      push(o, [&](ScanRow& r) {
        const bool alpha = o == "alpha_rules";
        const SetSpec target = image ? *image : moved_cloud(move_set(m, lambda, s, opt.sample_n));
        if (alpha) {
          const auto e = capacity::alpha_evaluate(target);
          r.value = e.value;
          r.kind = capacity::kind_name(e.kind);
          r.notes = e.rule;
          if (e.upper) r.notes += "; upper " + fmt(*e.upper);
        } else {
          const auto e = capacity::closed_form_gamma(target);
          if (!e) throw Error(std::string("no closed-form rule for the moved ") + sets::kind_name(target));
          r.value = e->value;
          r.kind = capacity::kind_name(e->kind);
          r.notes = e->rule;
        }
        if (image) r.notes += " [set " + std::string(sets::kind_name(target)) + "]";
      });
    } else if (o == "length") {
      for (int depth : opt.length_depths) {
        push(o, [&](ScanRow& r) {
          if (depth < 1 || depth > 24) throw InputError("length depth must lie in [1, 24]");
          if (lambda == cplx{}) {
            if (auto len = sets::known_length(s)) {
              r.value = *len;
              r.kind = "exact";
              r.notes = "depth=" + std::to_string(depth) + "; length of the unmoved set";
              return;
            }
          }
          const auto c = move_set(m, lambda, s, std::size_t{1} << depth);
          r.value = sets::discrete_length(c);
          r.kind = "lower_bound";
          r.notes = "depth=" + std::to_string(depth) + "; inscribed polygon of the moved sample";
        });
      }
    } else if (o == "box_dim") {
      push(o, [&](ScanRow& r) {
        const auto c = move_set(m, lambda, s, std::size_t{1} << opt.box_depth);
        std::vector<double> scales = opt.box_scales;
        if (scales.empty())
          for (int k = 2; k <= 9; ++k) scales.push_back(std::ldexp(1.0, -k));
        const auto bd = julia::box_dimension(c.points, scales);
        r.value = bd.dimension;
        r.kind = "comparable";
        r.notes = "r2=" + fmt(bd.r_squared);
      });
    } else {
      throw InputError("unknown observable '" + o + "'; expected one of gamma_leja, gamma_rules, alpha_rules, length, box_dim");
    }
  }
  return rows;
}

}  // namespace detail

/// One block of rows per λ, observables in the given order. A reparametrized
/// motion is scanned as the inner motion at b(λ) (ψ = φ ∘ b), so its rows
/// repeat the inner rows bit for bit. Rows are evaluated one λ at a time;
/// the engines inside parallelize.
inline std::vector<ScanRow> motion_scan(const MotionSpec& m, const SetSpec& s, const std::vector<cplx>& lambdas,
                                        const std::vector<std::string>& obs, const ScanOptions& opt = {}) {
  if (lambdas.empty()) throw InputError("motion scan: no lambda values");
  if (obs.empty()) throw InputError("motion scan: no observables");
  for (const auto& o : obs)
    if (std::find(observable_names().begin(), observable_names().end(), o) == observable_names().end())
      throw InputError("unknown observable '" + o + "'; expected one of gamma_leja, gamma_rules, alpha_rules, length, box_dim");
  for (auto l : lambdas) detail::check_lambda(l);
  std::vector<ScanRow> out;
  for (auto lam : lambdas) {
    const MotionSpec* cur = &m;
    cplx eff = lam;
    while (const auto* b = std::get_if<BlaschkeMotion>(&cur->v)) {
      eff = blaschke_eval(b->zeros, eff);
      cur = b->inner.get();
    }
    auto rows = detail::scan_rows(*cur, s, eff, lam, obs, opt);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace caplab::motion

#endif  // CAPLAB_MOTION_HPP
