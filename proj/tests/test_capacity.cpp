#include <catch_amalgamated.hpp>

#include <chrono>
#include <random>

#include "caplab/capacity.hpp"

using namespace caplab;
using namespace caplab::capacity;
using Catch::Approx;

namespace {

sets::SetSpec flagged(sets::SetSpec s, std::initializer_list<std::pair<std::optional<sets::Flag> sets::SetMeta::*, bool>> fl) {
  for (auto [member, v] : fl) s.meta.*member = sets::Flag{v, "user"};
  return s;
}

// H¹ of a union of intervals by counting fine cells.
double cell_length(const std::vector<std::pair<double, double>>& iv, double lo, double hi, int cells) {
  const double h = (hi - lo) / cells;
  int covered = 0;
  for (int k = 0; k < cells; ++k) {
    const double x = lo + (k + 0.5) * h;
    for (auto [a, b] : iv)
      if (a <= x && x <= b) {
        ++covered;
        break;
      }
  }
  return covered * h;
}

}  // namespace

TEST_CASE("closed forms") {
  auto t0 = std::chrono::steady_clock::now();
  CHECK(closed_form_gamma(sets::disk({1, 1}, 3))->value == 3.0);
  CHECK(closed_form_gamma(sets::segment(0.0, {0, 4}))->value == 1.0);
  CHECK(closed_form_gamma(sets::set_union({sets::segment(0, 1), sets::segment(2, 3)}))->value == 0.5);
  auto r = closed_form_gamma(sets::segment(0, 1));
  CHECK(r->kind == Kind::exact);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1e-3);

  CHECK(closed_form_gamma(sets::unit_circle())->value == 1.0);
  CHECK(closed_form_gamma(sets::make(sets::CircleArcs{{{0.0, kPi}}}))->value == Approx(std::sin(kPi / 4)).epsilon(1e-15));
  CHECK(closed_form_gamma(sets::julia(0.2))->value == 1.0);
  CHECK_FALSE(closed_form_gamma(sets::julia(1.0)).has_value());
  CHECK(closed_form_gamma(sets::cloud({0.0, 1.0, 2.0}))->value == 0.0);
  // null members, repeats and covered members drop out of unions
  CHECK(closed_form_gamma(sets::set_union({sets::cloud({5.0}), sets::disk(0, 1)}))->value == 1.0);
  CHECK(closed_form_gamma(sets::set_union({sets::disk(0, 2), sets::disk(0, 2)}))->value == 2.0);
  CHECK(closed_form_gamma(sets::set_union({sets::disk(0, 2), sets::segment(-1, 1)}))->value == 2.0);
  CHECK_FALSE(closed_form_gamma(sets::set_union({sets::disk(-5, 1), sets::disk(5, 1)})).has_value());
  // collinear polyline on a tilted line
  const cplx u = std::polar(1.0, 0.3);
  CHECK(closed_form_gamma(sets::make(sets::Polyline{{0.0, 2.0 * u, 3.0 * u}}))->value == Approx(0.75).epsilon(1e-12));
  CHECK_FALSE(closed_form_gamma(sets::make(sets::Polyline{{0.0, 1.0, {1, 1}}})).has_value());
}

TEST_CASE("real sets: quarter of the length against a cell-count oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 10.0), len(0.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<sets::SetSpec> members;
    std::vector<std::pair<double, double>> iv;
    const int k = 1 + t % 5;
    for (int i = 0; i < k; ++i) {
      const double a = pos(rng), b = a + len(rng);
      members.push_back(sets::segment(a, b));
      iv.push_back({a, b});
    }
    auto r = closed_form_gamma(members.size() == 1 ? members.front() : sets::set_union(members));
    REQUIRE(r.has_value());
    CHECK(r->value == Approx(cell_length(iv, 0.0, 12.0, 1200000) / 4.0).margin(2e-5));
  }
}

TEST_CASE("leja engine") {
  auto circle = sets::circle_sample(4096);
  auto t0 = std::chrono::steady_clock::now();
  auto c = leja_logcap(circle.points, 256, true);
  CHECK(c.value == Approx(1.0).margin(0.01));
  CHECK(c.kind == Kind::comparable);
  auto seg = sets::segment_sample(-2.0, 2.0, 4096);
  CHECK(leja_logcap(seg.points, 256, true).value == Approx(1.0).margin(0.02));
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 5.0);

  auto j = julia::trace_julia(julia::params(0.2), 1 << 12);
  CHECK(leja_logcap(j.points, 256, true).value == Approx(1.0).margin(0.03));

  CHECK_THROWS_AS(leja_logcap(circle.points, 2, true), Error);
  CHECK_THROWS_AS(leja_logcap(circle.points, 256, false), Error);
  auto lc = leja_logcap(circle.points, 64, false, true);
  CHECK(lc.method.find("logcap only") != std::string::npos);

  // exact affine covariance
  const cplx a{1.5, -2.0}, b{3, 7};
  std::vector<cplx> moved;
  for (auto z : j.points) moved.push_back(a * z + b);
  CHECK(leja_logcap(moved, 128, true).value == Approx(std::abs(a) * leja_logcap(j.points, 128, true).value).epsilon(1e-9));
}

TEST_CASE("lp engine") {
  lp::Options o;
  auto disk = lp_capacity(sets::disk(0, 1), {0.0}, o);
  CHECK(disk.value >= 0.999);
  CHECK(disk.value <= 1.0 + 1e-9);
  CHECK(disk.certificate["max_abs_f_refined"].get<double>() <= 1.001);
  CHECK(disk.kind == Kind::lower_bound);

  o.degree = 8;
  o.boundary_n = 2000;
  auto seg = lp_capacity(sets::segment(0, 1), {0.5}, o);
  CHECK(seg.value >= 0.22);
  CHECK(seg.value <= 0.25);

  o = {};
  auto two = lp_capacity(sets::set_union({sets::disk(-50, 1), sets::disk(50, 1)}), {-50.0, 50.0}, o);
  CHECK(two.value >= 1.9);
  // the explicit competitor a/(z−50) + a/(z+50), a = 1/(1 + 1/99), is feasible
  CHECK(two.value >= 2.0 / (1.0 + 1.0 / 99.0) - 1e-3);

  CHECK_THROWS_AS(lp_capacity(sets::disk(0, 1), {2.0}, o), Error);
  CHECK_THROWS_AS(lp_capacity(sets::julia(0.2), {0.0}, o), Error);

  // covariance with transformed poles
  o.degree = 3;
  const cplx a{0, 2}, b{1, 1};
  auto base = lp_capacity(sets::disk(0.3, 1), {0.5}, o);
  auto moved = lp_capacity(sets::affine_image(sets::disk(0.3, 1), a, b), {a * 0.5 + b}, o);
  CHECK(moved.value == Approx(2.0 * base.value).epsilon(1e-6));
  CHECK(base.value <= 1.0 + 1e-6);
}

TEST_CASE("tolsa engine") {
  auto s = sets::segment(0, 1);
  auto m = measures::segment_measure(0.0, 1.0, 200);
  auto e = tolsa_lower_bound(s, m);
  CHECK(e.value == Approx(0.5).margin(0.02));
  CHECK(e.certificate["grid_max_U"].get<double>() <= 1.0);
  CHECK(e.certificate["grid_max_curvature"].get<double>() == 0.0);

  // dilation by 2 doubles the mass
  auto s2 = sets::affine_image(s, 2.0, 0.0);
  auto m2 = measures::DiscreteMeasure(
      [&] {
        std::vector<cplx> z;
        for (auto a : m.atoms()) z.push_back(2.0 * a);
        return z;
      }(),
      m.weights(), 2.0 * m.resolution());
  CHECK(tolsa_lower_bound(s2, m2).value == Approx(2.0 * e.value).epsilon(1e-12));

  auto off = measures::DiscreteMeasure({0.5, {0.5, 0.1}}, {0.5, 0.5}, 0.01);
  CHECK_THROWS_WITH(tolsa_lower_bound(s, off), Catch::Matchers::ContainsSubstring("0.1"));

  TolsaOptions opt;
  opt.alpha_variant = true;
  auto a = tolsa_lower_bound(s, m, {}, opt);
  CHECK(a.certificate.contains("density_profile"));

  // a curved measure: circle atoms smeared over their spacing
  auto circ = sets::unit_circle();
  auto cm = default_measure(circ, 120);
  auto ce = tolsa_lower_bound(circ, cm);
  CHECK(ce.value > 0.0);
  CHECK(ce.certificate["grid_max_curvature"].get<double>() > 0.0);
}

TEST_CASE("metadata") {
  CHECK_THROWS_AS(derive_meta(flagged(sets::disk(0, 1), {{&sets::SetMeta::is_connected, false}})), InputError);
  CHECK_THROWS_AS(derive_meta(flagged(sets::segment(0, 1), {{&sets::SetMeta::tangent_free_certificate, true}})), InputError);
  CHECK_THROWS_AS(derive_meta(flagged(sets::cloud({0.0, 1.0, 2.0}), {{&sets::SetMeta::is_connected, true},
                                                                       {&sets::SetMeta::has_sigma_finite_length, true},
                                                                       {&sets::SetMeta::is_analytic_boundary, true}})),
                  InputError);
  auto m = derive_meta(sets::julia({0.2, 0.1}));
  CHECK(m.is_quasicircle->value);
  CHECK(m.tangent_free_certificate->value);
  CHECK(m.tangent_free_certificate->provenance.find("main cardioid") != std::string::npos);
  CHECK_FALSE(derive_meta(sets::julia(1.0)).is_connected->value);
  auto u = derive_meta(sets::set_union({sets::disk(-5, 1), sets::disk(5, 1)}));
  CHECK(u.is_analytic_boundary->value);
  CHECK_FALSE(derive_meta(sets::unit_circle()).is_analytic_boundary->value);
  CHECK(derive_meta(sets::make(sets::Polyline{{0.0, 1.0, {1, 1}}, true})).is_quasicircle->value);
  CHECK_FALSE(derive_meta(sets::make(sets::Polyline{{0.0, 1.0, {0, 1}, {1, 1}}, true})).is_quasicircle.has_value());
}

TEST_CASE("alpha rules") {
  auto c = alpha_evaluate(sets::unit_circle());
  CHECK(c.value == 0.0);
  CHECK(c.kind == Kind::exact);
  CHECK(alpha_evaluate(sets::julia(0.2)).value == 1.0);
  CHECK(alpha_evaluate(sets::julia(0.2)).kind == Kind::exact);
  auto d = alpha_evaluate(sets::disk(0, 2));
  CHECK(d.value == 2.0);
  CHECK(d.kind == Kind::exact);
  CHECK(alpha_evaluate(sets::segment(0, 1)).value == 0.0);
  CHECK(alpha_evaluate(sets::set_union({sets::cloud({9.0}), sets::disk(0, 1)})).value == 1.0);

  auto sample = flagged(sets::cloud(sets::circle_sample(512, 0, 2).points), {{&sets::SetMeta::is_connected, true}});
  auto iv = alpha_evaluate(sample);
  CHECK(iv.kind == Kind::interval);
  REQUIRE(iv.upper.has_value());
  CHECK(*iv.upper == Approx(2.0).margin(0.03));

  // α ≤ γ wherever both are known
  for (const auto& s : {sets::disk(0, 3), sets::segment(0, 2), sets::unit_circle(), sets::julia(0.2), sets::julia(-0.6),
                        sets::set_union({sets::segment(0, 1), sets::segment(2, 3)})}) {
    auto a = alpha_evaluate(s);
    auto g = gamma_estimate(s);
    CHECK(a.value <= g.value * (1 + 1e-12));
  }
  CHECK_THROWS_AS(alpha_evaluate(flagged(sets::disk(0, 1), {{&sets::SetMeta::has_sigma_finite_length, true}})), InputError);
}

TEST_CASE("gamma dispatcher") {
  auto j = gamma_estimate(sets::julia(0.2));
  CHECK(j.kind == Kind::exact);
  GammaOptions o;
  o.engine = Engine::leja;
  auto l = gamma_estimate(sets::julia(0.2), o);
  CHECK(l.value == Approx(1.0).margin(0.03));
  // γ ≥ diam/4 for connected sets
  for (auto s : {sets::julia(-0.6), sets::julia({0.1, 0.2}), sets::make(sets::Polyline{{0.0, 1.0, {1, 1}, {3, 2}}})}) {
    auto e = gamma_estimate(s, o);
    auto pts = sampling::boundary_points(s, 4096);
    CHECK(e.value >= sets::diameter(std::span<const cplx>(pts)) / 4.0 - 1e-3);
  }
  auto two = gamma_estimate(sets::set_union({sets::disk(-50, 1), sets::disk(50, 1)}));
  CHECK(two.kind == Kind::lower_bound);
  auto cantor_like = sets::set_union({sets::make(sets::CircleArcs{{{0.0, 1.0}}}), sets::make(sets::CircleArcs{{{0.0, 1.0}}, 10.0, 1.0})});
  auto ub = gamma_estimate(cantor_like);
  CHECK(ub.kind == Kind::upper_bound);
  CHECK(ub.value == Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_estimate(sets::julia(1.0)), Error);
}

TEST_CASE("classification") {
  auto circle = classify_jordan_curve(sets::unit_circle());
  for (const auto& c : circle.conditions) CHECK(c.verdict == Verdict::no);
  CHECK(circle.gamma_extremal_exists);
  CHECK(implication_violations(circle).empty());

  auto j = classify_jordan_curve(sets::julia(0.2));
  for (const auto& c : j.conditions) CHECK(c.verdict == Verdict::yes);
  CHECK(j.relationship == "alpha equals gamma on every subarc");

  auto cloud = classify_jordan_curve(sets::cloud({0.0, 1.0, {0, 1}}));
  for (const auto& c : cloud.conditions) CHECK(c.verdict == Verdict::inconclusive);

  auto arc = classify_jordan_curve(flagged(sets::cloud({0.0, 1.0, {2, 1}}), {{&sets::SetMeta::is_connected, true},
                                                                             {&sets::SetMeta::is_jordan_arc, true},
                                                                             {&sets::SetMeta::tangent_free_certificate, true}}));
  CHECK(arc.conditions[2].verdict == Verdict::yes);
  CHECK(arc.conditions[3].verdict == Verdict::yes);
  CHECK(arc.conditions[0].verdict == Verdict::inconclusive);
  REQUIRE(arc.alpha_extremal_exists.has_value());
  CHECK_FALSE(*arc.alpha_extremal_exists);

  auto seg = classify_jordan_curve(sets::segment(0, 1));
  CHECK(seg.conditions[2].verdict == Verdict::no);
  CHECK(seg.conditions[6].verdict == Verdict::no);
  CHECK(*seg.alpha_extremal_exists);

  CHECK_THROWS_AS(classify_jordan_curve(sets::disk(0, 1)), InputError);
  CHECK_THROWS_AS(classify_jordan_curve(sets::make(sets::CircleArcs{{{0.0, 1.0}, {2.0, 3.0}}})), InputError);

  // random flag sets on clouds: either rejected or consistent
  std::mt19937_64 rng(5);
  const std::array<std::optional<sets::Flag> sets::SetMeta::*, 6> members{
      &sets::SetMeta::is_connected, &sets::SetMeta::is_quasicircle, &sets::SetMeta::has_sigma_finite_length,
      &sets::SetMeta::is_analytic_boundary, &sets::SetMeta::tangent_free_certificate, &sets::SetMeta::is_jordan_arc};
  int accepted = 0;
  for (int t = 0; t < 400; ++t) {
    auto s = sets::cloud({0.0, 1.0, {1, 1}, {0, 2}});
    s.meta.is_connected = sets::Flag{true, "user"};
    for (auto mp : members)
      if (rng() % 3 == 0) s.meta.*mp = sets::Flag{rng() % 2 == 0, "user"};
    try {
      auto r = classify_jordan_curve(s);
      ++accepted;
      CHECK(implication_violations(r).empty());
    } catch (const InputError&) {
    }
  }
  CHECK(accepted > 50);
}

TEST_CASE("density profile") {
  const std::vector<double> deltas{1.0, 0.5, 0.25, 0.125};
  for (const auto& r : gamelin_garnett_profile(sets::unit_circle(), 1.0, deltas)) CHECK(r.ratio == 0.0);
  auto j = julia::trace_julia(julia::params(0.2), 4096);
  auto rows = gamelin_garnett_profile(sets::julia(0.2), j.points[100], deltas);
  for (const auto& r : rows) {
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio > 0.1);
    CHECK(r.kind == Kind::lower_bound);
  }
  const std::vector<double> big{5.0, 1.0};
  CHECK(gamelin_garnett_profile(sets::unit_circle(), {0, 1}, big).front().out_of_regime);
  CHECK_THROWS_AS(gamelin_garnett_profile(sets::unit_circle(), 0.5, deltas), InputError);
  const std::vector<double> up{0.1, 0.2};
  CHECK_THROWS_AS(gamelin_garnett_profile(sets::unit_circle(), 1.0, up), InputError);
}

TEST_CASE("semiadditivity") {
  auto r = semiadditivity_check(sets::disk(-50, 1), sets::disk(50, 1));
  CHECK(r.both.value >= 1.9);
  CHECK(r.ratio <= 1.0);
  auto p = semiadditivity_check(sets::cloud({3.0}), sets::disk(0, 1));
  CHECK(p.both.value == 1.0);
  CHECK(p.both.kind == Kind::exact);
  auto same = semiadditivity_check(sets::disk(0, 1), sets::disk(0, 1));
  CHECK(same.ratio == 0.5);
  const std::vector<double> shifts{4.0, 10.0, 40.0};
  auto rows = translate_table(sets::disk(0, 1), sets::disk(0, 1), shifts);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio >= rows[i - 1].ratio - 1e-3);
  CHECK(rows.back().ratio > 0.95);
}
