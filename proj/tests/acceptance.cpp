// Acceptance runner: `acceptance <k>` checks criterion k (1..13), `acceptance all`
// runs every one. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "caplab/caplab.hpp"

using namespace caplab;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
auto timed(double& secs, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

std::string num(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// ---------------------------------------------------------------------------

void closed_forms(Outcome& o) {
  struct Case {
    const char* name;
    sets::SetSpec set;
    double expect;
  };
  const std::vector<Case> cases{
      {"disk r=2.5", sets::disk({1, -1}, 2.5), 2.5},
      {"segment L=5", sets::segment({0, 0}, {3, 4}), 1.25},
      {"real set [0,1]u[2,3.5]u[3,4]", sets::set_union({sets::segment(0.0, 1.0), sets::segment(2.0, 3.5), sets::segment(3.0, 4.0)}),
       0.75},
  };
  for (const auto& c : cases) {
    double secs = 0.0;
    const auto e = timed(secs, [&] { return capacity::gamma_estimate(c.set, {.engine = capacity::Engine::rules}); });
    o.detail << " " << c.name << " -> " << num(e.value, 17) << " (" << num(secs * 1e3, 3) << " ms);";
    o.require(e.kind == capacity::Kind::exact, std::string(c.name) + " not exact");
    o.require(e.value == c.expect, std::string(c.name) + " value");
    o.require(secs < 1e-3, std::string(c.name) + " runtime");
  }
}

void leja_engine(Outcome& o) {
  capacity::GammaOptions opt{.engine = capacity::Engine::leja};
  opt.leja_n = 256;
  double secs = 0.0;
  const auto circle = timed(secs, [&] { return capacity::gamma_estimate(sets::unit_circle(), opt); });
  o.detail << " unit circle -> " << num(circle.value) << " (" << num(secs, 3) << " s);";
  o.require(std::abs(circle.value - 1.0) <= 0.01, "circle");
  o.require(secs < 5, "circle runtime");
  const auto seg = timed(secs, [&] { return capacity::gamma_estimate(sets::segment(-2.0, 2.0), opt); });
  o.detail << " segment [-2,2] -> " << num(seg.value) << " (" << num(secs, 3) << " s)";
  o.require(std::abs(seg.value - 1.0) <= 0.02, "segment");
  o.require(secs < 5, "segment runtime");
}

void julia_anchor(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tr = julia::trace_julia(julia::params(0.2), 4096);
  const auto g = capacity::leja_logcap(tr.points, 256, true);
  const auto a = capacity::alpha_evaluate(sets::julia(0.2));
  const double secs = seconds_since(t0);
  o.detail << " leja on 4096-point trace of J(0.2) -> " << num(g.value) << "; alpha rule -> " << num(a.value, 17) << " ("
           << capacity::kind_name(a.kind) << "); " << num(secs, 3) << " s";
  o.require(std::abs(g.value - 1.0) <= 0.03, "leja");
  o.require(a.kind == capacity::Kind::exact && a.value == 1.0, "alpha rule");
  o.require(secs < 60, "runtime");
}

void lp_engine(Outcome& o) {
  double secs = 0.0;
  const auto disk = timed(secs, [&] { return capacity::lp_capacity(sets::disk(0.0, 1.0), {}); });
  const double maxf = disk.certificate["max_abs_f_refined"].get<double>();
  o.detail << " unit disk -> " << num(disk.value) << " with max|f| " << num(maxf) << " (" << num(secs, 3) << " s);";
  o.require(disk.value >= 0.999 && maxf <= 1.001, "disk");
  o.require(secs < 120, "disk runtime");

  lp::Options deg8;
  deg8.degree = 8;
  const auto seg = timed(secs, [&] { return capacity::lp_capacity(sets::segment(0.0, 1.0), {0.5}, deg8); });
  o.detail << " segment [0,1] -> " << num(seg.value) << " (" << num(secs, 3) << " s);";
  o.require(seg.value >= 0.22 && seg.value <= 0.25, "segment");
  o.require(secs < 120, "segment runtime");

  const auto two = timed(secs, [&] {
    return capacity::lp_capacity(sets::set_union({sets::disk(-50.0, 1.0), sets::disk(50.0, 1.0)}), {});
  });
  o.detail << " two unit disks 100 apart -> " << num(two.value) << " (" << num(secs, 3) << " s)";
  o.require(two.value >= 1.9, "two disks");
  o.require(secs < 120, "two disks runtime");
}

void tolsa_engine(Outcome& o) {
  const auto m = measures::segment_measure(0.0, 1.0, 200);
  const auto e = capacity::tolsa_lower_bound(sets::segment(0.0, 1.0), m);
  const double maxu = e.certificate["grid_max_U"].get<double>();
  o.detail << " [0,1] with 200-atom length measure -> " << num(e.value) << ", grid max U " << num(maxu, 17) << ";";
  o.require(std::abs(e.value - 0.5) <= 0.02, "value");
  o.require(maxu <= 1.0, "certificate");

  // dilation by 2 is exact in floating point, so the estimate must scale exactly
  const auto m2 = measures::segment_measure(0.0, 2.0, 200);
  const auto e2 = capacity::tolsa_lower_bound(sets::segment(0.0, 2.0), m2);
  o.detail << " dilated by 2 -> " << num(e2.value, 17) << " vs " << num(2 * e.value, 17) << ";";
  o.require(e2.value == 2 * e.value, "dilation by 2 not exact");
  const auto m3 = measures::segment_measure(0.0, 3.0, 200);
  const auto e3 = capacity::tolsa_lower_bound(sets::segment(0.0, 3.0), m3);
  const double rel3 = std::abs(e3.value - 3 * e.value) / (3 * e.value);
  o.detail << " dilated by 3 -> relative error " << num(rel3, 3);
  o.require(rel3 <= 1e-12, "dilation by 3");
}

void menger_kernel(Outcome& o) {
  SplitMix64 rng(derive_seed(kSeed, 6));
  auto pt = [&] { return cplx(10 * uniform01(rng) - 5, 10 * uniform01(rng) - 5); };
  double worst = 0.0;
  int tested = 0;
  while (tested < 1000) {
    const cplx x = pt(), y = pt(), z = pt();
    // circumcentre from the perpendicular-bisector system, relative to x
    const cplx u = y - x, v = z - x;
    const double det = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
    if (std::abs(det) < 1e-6) continue;
    const double nu = std::norm(u), nv = std::norm(v);
    const cplx centre{(v.imag() * nu - u.imag() * nv) / det, (u.real() * nv - v.real() * nu) / det};
    const double oracle = 1.0 / std::abs(centre);
    worst = std::max(worst, std::abs(menger::menger_curvature(x, y, z) - oracle) / oracle);
    ++tested;
  }
  o.detail << " worst relative error on 1000 triples " << num(worst, 3) << ";";
  o.require(worst <= 1e-9, "circumcircle oracle");

  double collinear = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const cplx d{std::ldexp(static_cast<double>(rng() % 64) - 32, -4), std::ldexp(static_cast<double>(rng() % 64) - 32, -4)};
    const cplx base{std::ldexp(static_cast<double>(rng() % 256), -3), 0.0};
    const double a = static_cast<double>(rng() % 9), b = a + 1 + static_cast<double>(rng() % 9),
                 c = b + 1 + static_cast<double>(rng() % 9);
    collinear = std::max(collinear, menger::menger_curvature(base + a * d, base + b * d, base + c * d));
  }
  o.detail << " largest collinear curvature " << num(collinear) << ";";
  o.require(collinear == 0.0, "collinear");

  const double total = menger::total_curvature(measures::uniform_on(sets::circle_sample(200).points));
  o.detail << " uniform circle measure n=200 -> " << num(total);
  o.require(std::abs(total - 1.0) <= 0.02, "circle total curvature");
}

void boettcher(Outcome& o) {
  SplitMix64 rng(derive_seed(kSeed, 7));
  const cplx cs[] = {0.1, 0.2, -0.6, {0.2, 0.1}};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const cplx w = std::polar(1.001 + 2 * uniform01(rng), kTwoPi * uniform01(rng));
    worst = std::max(worst, julia::boettcher_residual(julia::params(cs[t % 4]), w));
  }
  double ident = 0.0;
  for (int t = 0; t < 100; ++t) {
    const cplx w = std::polar(1.000001 + 4 * uniform01(rng), kTwoPi * uniform01(rng));
    ident = std::max(ident, std::abs(julia::boettcher_map(julia::params(0.0), w) - w));
  }
  o.detail << " conjugacy residual max " << num(worst, 3) << " over 100 (c, w); |B_0(w) - w| max " << num(ident, 3);
  o.require(worst < 1e-8, "conjugacy");
  o.require(ident <= 1e-12, "identity at c=0");
}

void length_table(Outcome& o) {
  const std::vector<int> depths{6, 7, 8, 9, 10, 11, 12, 13};
  const auto flat = julia::length_growth(julia::params(0.0), depths);
  o.detail << " c=0:";
  for (const auto& r : flat) {
    o.detail << " " << r.depth << ":" << num(r.length, 8);
    o.require(std::abs(r.length - kTwoPi) <= 1e-3, "c=0 depth " + std::to_string(r.depth) + " off 2pi by " +
                                                       num(std::abs(r.length - kTwoPi), 3));
  }
  const auto grow = julia::length_growth(julia::params(0.2), depths);
  o.detail << "; c=0.2:";
  for (std::size_t i = 0; i < grow.size(); ++i) {
    o.detail << " " << grow[i].depth << ":" << num(grow[i].length, 8);
    if (i > 0) o.require(grow[i].length > grow[i - 1].length, "c=0.2 not increasing at depth " + std::to_string(grow[i].depth));
  }
}

void harmonic_ks(Outcome& o) {
  for (cplx c : {cplx(0.0), cplx(0.2)}) {
    const auto p = julia::params(c);
    const auto a = julia::harmonic_samples(p, 10000, derive_seed(kSeed, 90));
    const auto b = julia::inverse_iteration_samples(p, 10000, 48, derive_seed(kSeed, 91));
    const double ks = julia::ks_angular(a, b);
    o.detail << " c=" << num(c.real()) << " KS " << num(ks, 4) << ";";
    o.require(ks < 0.02, "KS at c=" + num(c.real()));
  }
}

void discontinuity_scan(Outcome& o) {
  std::vector<cplx> lambdas{0.0};
  for (int n = 1; n <= 8; ++n) lambdas.push_back(1.0 / (n + 2));
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = motion::motion_scan(*motion::boettcher(), sets::unit_circle(), lambdas, {"gamma_leja", "alpha_rules", "length"});
  const double secs = seconds_since(t0);
  double worst_gamma = 0.0, min_len = kInf;
  for (const auto& r : rows) {
    if (!r.value) {
      o.require(false, r.observable + " error: " + r.notes);
      continue;
    }
    const bool moved = r.lambda != cplx{};
    if (r.observable == "gamma_leja") worst_gamma = std::max(worst_gamma, std::abs(*r.value - 1.0));
    if (r.observable == "alpha_rules") o.require(*r.value == (moved ? 1.0 : 0.0), "alpha at lambda " + num(r.lambda.real()));
    if (r.observable == "length" && moved) min_len = std::min(min_len, *r.value);
  }
  o.detail << " " << lambdas.size() << " lambdas; max |gamma - 1| " << num(worst_gamma, 3)
           << "; alpha 0 at lambda=0 and 1 elsewhere; shortest moved length " << num(min_len, 8) << "; " << num(secs, 3) << " s";
  o.require(worst_gamma <= 0.03, "gamma column");
  o.require(min_len > kTwoPi, "length column");
  o.require(secs < 600, "runtime");
}

void blaschke_scan(Outcome& o) {
  const std::vector<cplx> zeros{0.3, {0.0, 0.5}, -0.7};
  const std::vector<std::string> obs{"gamma_leja", "alpha_rules", "length"};
  auto base = motion::boettcher();
  const auto inner = motion::motion_scan(*base, sets::unit_circle(), {0.0}, obs);
  const auto rep = motion::motion_scan(*motion::blaschke(base, zeros), sets::unit_circle(), zeros, obs);
  bool identical = rep.size() == zeros.size() * inner.size();
  for (std::size_t i = 0; identical && i < rep.size(); ++i) {
    const auto& a = rep[i];
    const auto& b = inner[i % inner.size()];
    identical = a.observable == b.observable && a.value == b.value && a.kind == b.kind && a.notes == b.notes;
  }
  o.detail << " rows at each zero equal the inner rows at 0: " << (identical ? "bit-identical" : "differ") << ";";
  o.require(identical, "replication");

  // α jumps from 0 at each zero to 1 next to it
  std::vector<cplx> near;
  for (auto b : zeros) near.push_back(b + 1e-3);
  const auto off = motion::motion_scan(*motion::blaschke(base, zeros), sets::unit_circle(), near, {"alpha_rules"});
  bool jumps = true;
  for (const auto& r : off) jumps = jumps && r.value && *r.value == 1.0;
  o.detail << " alpha next to every zero is 1: " << (jumps ? "yes" : "no");
  o.require(jumps, "discontinuity does not replicate");
}

void transforms_criterion(Outcome& o) {
  using namespace transforms;
  const double h = 1.0 / 32;
  const cplx z0{1.3, 0.4};  // off the grid
  auto f_exact = [&](cplx w) { return 1.0 / (w - z0); };
  const auto n = static_cast<std::size_t>(std::lround(2.0 / h)) + 1;
  auto f = sample({-1.0, -1.0}, h, n, n, f_exact);
  const auto p = make_partition({-1, -1}, {1, 1}, 0.25);
  const auto phis = partition_of_unity(p, f);
  GridFunction total = make_grid(f.origin, f.h, f.width, f.height);
  double agree = 0.0;
  for (std::size_t q = 0; q < phis.size(); ++q) {
    const auto v = vitushkin_localize(f, phis[q]);
    total = axpy(total, 1.0, v.primary);
    const cplx c = p.centre(static_cast<int>(q % p.nx), static_cast<int>(q / p.nx));
    if (std::max(std::abs(c.real()), std::abs(c.imag())) + p.side <= 1.0 - h) agree = std::max(agree, v.max_difference);
  }
  double recon = 0.0;
  for (std::size_t j = 1; j + 1 < total.height; ++j)
    for (std::size_t i = 1; i + 1 < total.width; ++i) recon = std::max(recon, std::abs(total.at(i, j) - f_exact(total.point(i, j))));
  o.detail << " h=1/32, " << phis.size() << " squares: reconstruction error " << num(recon, 3) << ", formula difference "
           << num(agree, 3) << " (limit " << num(10 * h, 3) << ");";
  o.require(recon <= 10 * h, "reconstruction");
  o.require(agree <= 10 * h, "formulas disagree");

  const double hp = 1.0 / 128;
  const auto m = static_cast<std::size_t>(std::lround(2.0 / hp));
  auto g = sample({-1.0 + hp / 2, -1.0 + hp / 2}, hp, m, m, [](cplx w) { return -1.0 / w; });
  const cplx pair = weak_pairing(dbar(g), [](cplx w) { return smoothstep(1.0 - std::abs(w) / 0.5); });
  const double rel = std::abs(pair + kPi) / kPi;
  o.detail << " weak pairing at h=1/128 -> " << num(pair.real()) << (pair.imag() < 0 ? "" : "+") << num(pair.imag(), 3)
           << "i, " << num(100 * rel, 3) << "% from -pi";
  o.require(rel <= 0.05, "pairing");
}

void property_suites(Outcome& o) {
  const std::vector<std::string> wanted{"alpha_at_most_gamma",
                                        "gamma_affine_covariance",
                                        "tolsa_affine_covariance",
                                        "lp_affine_covariance",
                                        "monotone_on_rule_covered_nestings",
                                        "connected_capacity_at_least_quarter_diameter",
                                        "null_set_union_leaves_capacity"};
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0, failed = 0, seen = 0;
  for (const auto& name : props::suite_names()) {
    const auto rep = props::run_suite(name, kSeed);
    for (const auto& c : rep.checks) {
      ++checks;
      if (std::find(wanted.begin(), wanted.end(), c.name) != wanted.end()) ++seen;
      if (!c.passed) {
        ++failed;
        o.require(false, c.name + ": " + c.failure);
      }
    }
  }
  const double secs = seconds_since(t0);
  o.detail << " " << checks << " checks in " << props::suite_names().size() << " suites, " << failed << " failed; "
           << num(secs, 3) << " s";
  o.require(seen == wanted.size(), "a required check is missing");
  o.require(secs < 900, "runtime");
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"closed_forms_exact", closed_forms},
      {"leja_engine", leja_engine},
      {"julia_capacity_anchor", julia_anchor},
      {"lp_engine", lp_engine},
      {"tolsa_engine", tolsa_engine},
      {"menger_kernel", menger_kernel},
      {"boettcher_map", boettcher},
      {"julia_length_table", length_table},
      {"harmonic_sampler_ks", harmonic_ks},
      {"motion_discontinuity_scan", discontinuity_scan},
      {"blaschke_reparametrization", blaschke_scan},
      {"transforms", transforms_criterion},
      {"property_suites", property_suites},
  };
  return all;
}

bool run_one(std::size_t k) {
  const auto& c = criteria()[k - 1];
  Outcome o;
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  std::printf("%s %02zu %s:%s\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <1-%zu|all>\n", argv[0], criteria().size());
    return 2;
  }
  const std::string arg = argv[1];
  if (arg == "all") {
    bool ok = true;
    for (std::size_t k = 1; k <= criteria().size(); ++k) ok = run_one(k) && ok;
    return ok ? 0 : 1;
  }
  std::size_t k = 0;
  try {
    k = std::stoul(arg);
  } catch (const std::exception&) {
  }
  if (k < 1 || k > criteria().size()) {
    std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
    return 2;
  }
  return run_one(k) ? 0 : 1;
}
