#include <catch_amalgamated.hpp>

#include <chrono>
#include <random>

#include "caplab/motion.hpp"

using namespace caplab;
using namespace caplab::motion;
using Catch::Approx;

namespace {

const double eps = 0x1.0p-20;

std::vector<cplx> lambda_path() {
  std::vector<cplx> l{0.0};
  for (int n = 1; n <= 8; ++n) l.push_back(1.0 / (n + 2));
  return l;
}

}  // namespace

TEST_CASE("blaschke products") {
  CHECK(blaschke_eval({0.5, {0, 0.5}}, 0.0) == cplx(0.25, 0.0));
  CHECK(std::abs(blaschke_eval({0.5, {0, 0.5}}, 0.0) - 0.25) < 1e-15);
  for (cplx b : {cplx(0.3), cplx(0, 0.5), cplx(-0.7)}) CHECK(blaschke_eval({0.3, {0, 0.5}, -0.7}, b) == cplx{});
  const cplx v = blaschke_eval({0.5}, 0.9);
  CHECK(v.imag() == 0.0);
  // direct evaluation: −(0.9 − 0.5)/(1 − 0.45)
  CHECK(v.real() == Approx(-(0.9 - 0.5) / (1 - 0.45)).epsilon(1e-15));
  CHECK(blaschke_eval({0.0, 0.5}, 0.2) == blaschke_eval({0.5}, 0.2) * 0.2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::vector<cplx> z{0.3, {0, 0.5}, -0.7, {0.6, 0.6}};
  for (int t = 0; t < 1000; ++t) {
    cplx w{u(rng), u(rng)};
    if (std::abs(w) >= 0.999) continue;
    CHECK(std::abs(blaschke_eval(z, w)) < 1.0);
  }
  CHECK_THROWS_AS(blaschke_eval({1.0}, 0.1), InputError);
  CHECK_THROWS_AS(blaschke_eval({0.5}, 1.0), InputError);
  CHECK_THROWS_AS(blaschke(boettcher(), {cplx(0, 1.2)}), InputError);
}

TEST_CASE("boettcher motion") {
  auto m = boettcher();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> a(0, kTwoPi), r(1.0 + eps, 3.0);
  for (int t = 0; t < 200; ++t) {
    const cplx z = std::polar(r(rng), a(rng));
    CHECK(motion_eval(*m, 0.0, z) == z);
  }
  // λ = 0.8 lands on the J_{0.2} trace
  auto tr = julia::trace_julia(julia::params(0.2), 64);
  for (std::size_t k = 0; k < 64; ++k)
    CHECK(motion_eval(*m, 0.8, std::polar(1.0 + eps, kTwoPi * k / 64.0)) == tr.points[k]);
  CHECK_THROWS_AS(motion_eval(*m, 0.5, 0.5), Error);
  CHECK_THROWS_AS(motion_eval(*m, 1.0, 2.0), InputError);

  // holomorphy in λ: finite-difference ∂/∂λ̄ vanishes
  for (cplx z : {std::polar(1.0 + eps, 0.3), cplx(1.5, 0.2), std::polar(1.01, 2.0)}) {
    for (cplx lam : {cplx(0.3), cplx(-0.2, 0.4), cplx(0.1, -0.5)}) {
      const double h = 1e-5;
      const cplx fx = (motion_eval(*m, lam + h, z) - motion_eval(*m, lam - h, z)) / (2 * h);
      const cplx fy = (motion_eval(*m, lam + cplx(0, h), z) - motion_eval(*m, lam - cplx(0, h), z)) / (2 * h);
      CHECK(std::abs(0.5 * (fx + cplx(0, 1) * fy)) < 1e-5);
    }
  }
  // injectivity on random pairs
  for (cplx lam : {cplx(0.5), cplx(-0.9), cplx(0.3, 0.6)}) {
    for (int t = 0; t < 1000; ++t) {
      const cplx z1 = std::polar(r(rng), a(rng)), z2 = std::polar(r(rng), a(rng));
      CHECK(std::abs(motion_eval(*m, lam, z1) - motion_eval(*m, lam, z2)) > 1e-12);
    }
  }
  // inverse
  for (cplx lam : {cplx(0.5), cplx(0.3, 0.6)}) {
    const cplx z = std::polar(1.0 + eps, 1.1);
    CHECK(std::abs(motion_inverse(*m, lam, motion_eval(*m, lam, z)) - z) < 1e-12);
  }
}

TEST_CASE("moving sets") {
  auto m = boettcher();
  auto base = move_set(*m, 0.0, sets::unit_circle(), 256);
  for (auto z : base.points) CHECK(std::abs(z) == Approx(1.0 + eps).epsilon(1e-15));
  auto moved = move_set(*m, 0.8, sets::unit_circle(), 256);
  auto tr = julia::trace_julia(julia::params(0.2), 256);
  CHECK(moved.points == tr.points);
  CHECK(moved.params == base.params);
  CHECK(image_spec(*m, 0.8, sets::unit_circle())->as<sets::Julia>().c == cplx(0.2));

  // translate union: pointwise (E_λ + d) ∪ F_λ
  const cplx d = 6.0;
  auto tu = translate_union(m, m, d);
  auto e = sets::make(sets::CircleArcs{{{0.0, kPi}}});
  auto k = sets::set_union({sets::affine_image(e, 1.0, d), sets::unit_circle()});
  auto kl = move_set(*tu, 0.5, k, 512);
  auto el = move_set(*m, 0.5, e, 256);
  auto fl = move_set(*m, 0.5, sets::unit_circle(), 256);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(kl.points[i] - (el.points[i] + d)) < 1e-12);
    CHECK(kl.points[256 + i] == fl.points[i]);
  }
  auto rec = check_translate_disjoint(*tu, k, 0.99);
  CHECK(rec.min_distance > 1.0);
  CHECK(rec.grid_points == 33);
  CHECK(motion_eval(*tu, 0.0, cplx(6.0, 1.0 + eps)) == cplx(6.0, 1.0 + eps));
}

TEST_CASE("blaschke reparametrization") {
  auto inner = boettcher();
  const std::vector<cplx> zeros{0.3, {0, 0.5}, -0.7};
  auto m = blaschke(inner, zeros);
  const cplx b0 = blaschke_eval(zeros, 0.0);
  // points of K = K'_{b(0)} stay put at λ = 0 and move to K'_{b(λ)}
  const cplx w = std::polar(1.0 + eps, 0.7);
  const cplx zk = motion_eval(*inner, b0, w);
  CHECK(motion_eval(*m, 0.0, zk) == zk);
  for (cplx lam : {cplx(0.2), cplx(0.1, -0.3)}) {
    const cplx expect = motion_eval(*inner, blaschke_eval(zeros, lam), w);
    CHECK(std::abs(motion_eval(*m, lam, zk) - expect) < 1e-12);
  }
  for (auto beta : zeros) CHECK(std::abs(motion_eval(*m, beta, zk) - w) < 1e-12);

  // composition of scans, bit for bit
  const std::vector<std::string> obs{"gamma_leja", "gamma_rules", "alpha_rules", "length"};
  ScanOptions opt;
  opt.length_depths = {8, 10};
  auto ref = motion_scan(*inner, sets::unit_circle(), {0.0}, obs, opt);
  auto rep = motion_scan(*m, sets::unit_circle(), zeros, obs, opt);
  REQUIRE(rep.size() == 3 * ref.size());
  for (std::size_t j = 0; j < zeros.size(); ++j)
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto& a = rep[j * ref.size() + i];
      const auto& b = ref[i];
      CHECK(a.lambda == zeros[j]);
      CHECK(a.observable == b.observable);
      CHECK(a.value == b.value);
      CHECK(a.kind == b.kind);
      CHECK(a.notes == b.notes);
    }
  // off the zeros the reparametrized row is the inner row at b(λ)
  const cplx lam{0.1, 0.2};
  auto r1 = motion_scan(*m, sets::unit_circle(), {lam}, {"gamma_leja", "alpha_rules"}, opt);
  auto r2 = motion_scan(*inner, sets::unit_circle(), {blaschke_eval(zeros, lam)}, {"gamma_leja", "alpha_rules"}, opt);
  CHECK(r1[0].value == r2[0].value);
  CHECK(r1[1].value == r2[1].value);
  CHECK(*r1[1].value == 1.0);
  // repeated runs are identical
  auto again = motion_scan(*m, sets::unit_circle(), zeros, obs, opt);
  for (std::size_t i = 0; i < rep.size(); ++i) CHECK(again[i].value == rep[i].value);
}

TEST_CASE("discontinuity scan") {
  auto t0 = std::chrono::steady_clock::now();
  auto rows = motion_scan(*boettcher(), sets::unit_circle(), lambda_path(),
                          {"gamma_leja", "gamma_rules", "alpha_rules", "length", "box_dim"});
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 600);
  for (const auto& r : rows) {
    INFO(r.observable << " at " << r.lambda << ": " << r.notes);
    REQUIRE(r.value.has_value());
    const bool zero = r.lambda == cplx{};
    if (r.observable == "gamma_leja") CHECK(*r.value == Approx(1.0).margin(0.03));
    if (r.observable == "gamma_rules") CHECK(*r.value == 1.0);
    if (r.observable == "alpha_rules") CHECK(*r.value == (zero ? 0.0 : 1.0));
    if (r.observable == "length") {
      if (zero)
        CHECK(*r.value == kTwoPi);
      else
        CHECK(*r.value > kTwoPi);
    }
  }
  // the length grows with the sampling depth off λ = 0
  std::vector<double> lens;
  for (const auto& r : rows)
    if (r.observable == "length" && r.lambda == cplx(1.0 / 3)) lens.push_back(*r.value);
  REQUIRE(lens.size() == 3);
  CHECK(lens[0] < lens[1]);
  CHECK(lens[1] < lens[2]);

  CHECK_THROWS_AS(motion_scan(*boettcher(), sets::unit_circle(), {0.0}, {"nope"}), InputError);
  // row failures are recorded, not thrown
  auto bad = motion_scan(*boettcher(), sets::disk(0, 0.5), {0.5}, {"gamma_leja"});
  CHECK(bad[0].kind == "error");
  CHECK_FALSE(bad[0].value.has_value());
}
