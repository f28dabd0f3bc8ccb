#include <catch_amalgamated.hpp>

#include <random>

#include "caplab/julia.hpp"

using namespace caplab;
using namespace caplab::julia;
using Catch::Approx;

TEST_CASE("main cardioid membership") {
  CHECK(in_main_cardioid(0.0));
  CHECK(in_main_cardioid(0.2));
  CHECK(in_main_cardioid({0.2, 0.1}));
  CHECK(in_main_cardioid(-0.6));
  CHECK_FALSE(in_main_cardioid(1.0));
  CHECK_FALSE(in_main_cardioid(-1.0));  // period-two bulb
  // the disk of radius 1/4 is inside
  for (int k = 0; k < 64; ++k) CHECK(in_main_cardioid(std::polar(0.2499, kTwoPi * k / 64)));
  // cusp and a boundary point just outside
  CHECK_FALSE(in_main_cardioid(0.2501));
}

TEST_CASE("escape time") {
  auto p0 = params(0.0);
  CHECK(escape_time(p0, 3.0) == 0);
  CHECK_FALSE(escape_time(p0, 0.5).has_value());
  CHECK_FALSE(escape_time(params(0.2), 0.0).has_value());
  CHECK(escape_time(params(1.0), 0.0).has_value());
  // for c = 0 an orbit is bounded iff |z| <= 1
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  JuliaParams p{0.0};
  p.max_iter = 200;
  for (int t = 0; t < 2000; ++t) {
    const cplx z{u(rng), u(rng)};
    const double r = std::abs(z);
    if (std::abs(r - 1.0) < 1e-6) continue;
    CHECK(escape_time(p, z).has_value() == (r > 1.0));
  }
  CHECK(params(3.0).escape_radius == 4.0);
  JuliaParams bad{0.0, 1.5};
  CHECK_THROWS_AS(bad.resolved(), InputError);
}

TEST_CASE("boettcher map basics") {
  auto p0 = params(0.0);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> r(1.001, 5.0), a(-kPi, kPi);
  for (int t = 0; t < 100; ++t) {
    const cplx w = std::polar(r(rng), a(rng));
    CHECK(std::abs(boettcher_map(p0, w) - w) <= 1e-12 * std::abs(w));
  }
  auto p = params(0.2);
  CHECK(boettcher_residual(p, 2.0 * std::polar(1.0, kPi / 5)) < 1e-8);
  for (int t = 0; t < 64; ++t) {
    const cplx w = std::polar(10.0, kTwoPi * t / 64);
    CHECK(std::abs(boettcher_map(p, w) - w) * std::abs(w) <= 1.0);
  }
  CHECK_THROWS_AS(boettcher_map(p, 0.5), Error);
}

TEST_CASE("boettcher conjugacy and real symmetry") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u01(0, 1);
  for (cplx c : {cplx(0.1), cplx(0.2), cplx(-0.6), cplx(0.2, 0.1)}) {
    auto p = params(c);
    for (int t = 0; t < 100; ++t) {
      const double rad = 1.0 + 1e-3 + 2.0 * u01(rng) * u01(rng);
      const cplx w = std::polar(rad, kTwoPi * u01(rng));
      CHECK(boettcher_residual(p, w) < 1e-8);
      if (c.imag() == 0.0) CHECK(std::abs(boettcher_map(p, std::conj(w)) - std::conj(boettcher_map(p, w))) < 1e-10);
    }
  }
}

TEST_CASE("julia traces") {
  auto t8 = trace_julia(params(0.0), 8);
  REQUIRE(t8.size() == 8);
  CHECK(t8.closed);
  REQUIRE(t8.trace_offset.has_value());
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::abs(t8.points[k]) == Approx(1.0 + *t8.trace_offset).epsilon(1e-14));
    CHECK(std::abs(t8.points[(k + 1) % 8] - t8.points[k]) == Approx(std::abs(t8.points[1] - t8.points[0])).epsilon(1e-12));
  }
  t8.check();

  auto p = params(0.2);
  auto fine = trace_julia(p, 4096);
  CHECK(sets::discrete_length(fine) > kTwoPi);
  auto half = trace_julia(p, 2048);
  for (std::size_t k = 0; k < half.size(); ++k) {
    CHECK(half.points[k] == fine.points[2 * k]);
    CHECK(half.params[k] == fine.params[2 * k]);
  }
  CHECK_THROWS_AS(trace_julia(p, 1000), Error);
  CHECK_THROWS_AS(trace_julia(params(1.0), 64), Error);
}

TEST_CASE("harmonic measure samplers agree") {
  for (cplx c : {cplx(0.0), cplx(0.2), cplx(-0.6)}) {
    auto p = params(c);
    auto h = harmonic_samples(p, 10000, 7);
    auto q = inverse_iteration_samples(p, 10000, 48, 7);
    CHECK(measures::total_mass(h) == Approx(1.0).epsilon(1e-12));
    CHECK(ks_angular(h, q) < 0.02);
    for (auto z : q.atoms()) CHECK(std::abs(z) <= p.escape_radius);
  }
  auto p0 = params(0.0);
  for (auto z : inverse_iteration_samples(p0, 500, 40, 3).atoms()) CHECK(std::abs(std::abs(z) - 1.0) < 1e-9);
  for (auto z : harmonic_samples(p0, 500, 3).atoms()) CHECK(std::abs(z) == Approx(1.0 + p0.trace_offset).epsilon(1e-14));
  // reproducible and independent of the thread count
  set_thread_count(1);
  auto a = harmonic_samples(params(0.2), 3000, 99);
  set_thread_count(3);
  auto b = harmonic_samples(params(0.2), 3000, 99);
  set_thread_count(0);
  CHECK(a == b);
  CHECK_FALSE(a == harmonic_samples(params(0.2), 3000, 100));
  CHECK_THROWS_AS(inverse_iteration_samples(params(1.0), 10, 10, 1), Error);
}

TEST_CASE("length growth") {
  const std::vector<int> depths{6, 7, 8, 9, 10, 11, 12, 13};
  auto circle = length_growth(params(0.0), depths);
  for (std::size_t i = 1; i < circle.size(); ++i) CHECK(circle[i].length >= circle[i - 1].length);
  // inscribed 2^d-gon of the (1+ε)-circle, computed directly
  for (const auto& r : circle) {
    const double eps = params(0.0).trace_offset;
    const double polygon = 2.0 * r.n_angles * (1 + eps) * std::sin(kPi / r.n_angles);
    CHECK(r.length == Approx(polygon).epsilon(1e-12));
  }
  auto rows = length_growth(params(0.2), depths);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].length > rows[i - 1].length);
  for (cplx c : {cplx(-0.6), cplx(0.1, 0.2)}) {
    auto g = length_growth(params(c), depths);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i].length >= g[i - 1].length);
  }
}

TEST_CASE("box counting dimension") {
  std::vector<double> scales;
  for (int k = 2; k <= 9; ++k) scales.push_back(std::ldexp(1.0, -k));
  auto circle = sets::circle_sample(1 << 14);
  CHECK(box_dimension(circle.points, scales).dimension == Approx(1.0).margin(0.05));
  auto seg = sets::segment_sample({-1, 0.3}, {1, -0.2}, 1 << 14);
  CHECK(box_dimension(seg.points, scales).dimension == Approx(1.0).margin(0.05));
  auto j = trace_julia(params(-0.6), 1 << 14);
  auto bd = box_dimension(j.points, scales);
  CHECK(bd.dimension >= 1.03);
  CHECK(bd.r_squared > 0.99);
  const std::vector<double> coarse{4.0, 8.0};
  CHECK_THROWS_AS(box_dimension(circle.points, coarse), Error);
}
