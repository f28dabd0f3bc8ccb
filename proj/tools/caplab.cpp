// caplab command-line driver. Exit codes: 0 success, 1 computation error,
// 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "caplab/caplab.hpp"
#include "cli_support.hpp"

using namespace caplab;
using cli::json;

namespace {

struct Globals {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::string manifest;
};

sets::SetSpec load_set_arg(const std::string& arg) {
  if (arg == "circle") return sets::unit_circle();
  if (arg == "disk") return sets::disk(0, 1);
  return io::load_set(arg);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> default_box_scales() {
  std::vector<double> s;
  for (int k = 2; k <= 9; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

// ---------------------------------------------------------------------------
// capacity

struct CapacityArgs {
  std::string set, quantity = "gamma", engine = "auto", measure, profile_at, radii, out = "-";
  std::size_t n = 256, sample_n = 4096, atoms = 200, boundary_n = 2000;
  int degree = 1;
  std::vector<std::string> poles;
  bool alpha_variant = false, allow_disconnected = false;
};

void add_capacity(CLI::App& app, CapacityArgs& a) {
  auto* c = app.add_subcommand("capacity", "Estimate analytic capacity (gamma) or continuous analytic capacity (alpha)");
  c->add_option("--set", a.set, "Set file (JSON), or 'circle' / 'disk' for the unit circle / disk")->required();
  c->add_option("--quantity", a.quantity, "gamma or alpha")->check(CLI::IsMember({"gamma", "alpha"}))->capture_default_str();
  c->add_option("--engine", a.engine, "auto, rules, leja, lp or tolsa")
      ->check(CLI::IsMember({"auto", "rules", "leja", "lp", "tolsa"}))
      ->capture_default_str();
  c->add_option("--n", a.n, "Leja points")->capture_default_str();
  c->add_option("--sample-n", a.sample_n, "Boundary samples handed to Leja")->capture_default_str();
  c->add_option("--pole", a.poles, "LP pole as re,im (repeatable; default: one per component)");
  c->add_option("--degree", a.degree, "LP Laurent degree per pole")->capture_default_str();
  c->add_option("--boundary-n", a.boundary_n, "LP constraint samples per component")->capture_default_str();
  c->add_option("--measure", a.measure, "Measure file for the Tolsa engine (default: length-type measure on the set)");
  c->add_option("--atoms", a.atoms, "Atoms of the default Tolsa measure")->capture_default_str();
  c->add_flag("--alpha-variant", a.alpha_variant, "Tolsa: also report the density profile");
  c->add_flag("--allow-disconnected", a.allow_disconnected, "Leja: accept disconnected sets (logarithmic capacity only)");
  c->add_option("--profile-at", a.profile_at, "Emit the local ratio table gamma(E∩B(z,δ))/δ at this point instead (CSV)");
  c->add_option("--radii", a.radii, "Decreasing radii for --profile-at, comma separated");
  c->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
}

void run_capacity(const CapacityArgs& a, cli::Run& run) {
  const auto s = load_set_arg(a.set);
  if (!a.profile_at.empty()) {
    if (a.radii.empty()) throw InputError("--profile-at needs --radii");
    const auto rows = capacity::gamelin_garnett_profile(s, cli::parse_complex(a.profile_at), cli::parse_real_list(a.radii),
                                                        a.sample_n);
    io::CsvWriter w({"delta", "ratio", "kind", "rule", "out_of_regime"});
    for (const auto& r : rows)
      w.row({io::fmt(r.delta), r.ratio ? io::fmt(*r.ratio) : "", capacity::kind_name(r.kind), r.rule,
             r.out_of_regime ? "true" : "false"});
    run.emit(a.out, w.str());
    return;
  }
  capacity::GammaOptions o;
  o.leja_n = a.n;
  o.sample_n = a.sample_n;
  o.allow_disconnected = a.allow_disconnected;
  for (const auto& p : a.poles) o.poles.push_back(cli::parse_complex(p));
  o.lp.degree = a.degree;
  o.lp.boundary_n = a.boundary_n;
  o.tolsa_atoms = a.atoms;
  o.tolsa.alpha_variant = a.alpha_variant;
  static const std::map<std::string, capacity::Engine> engines{{"auto", capacity::Engine::automatic},
                                                               {"rules", capacity::Engine::rules},
                                                               {"leja", capacity::Engine::leja},
                                                               {"lp", capacity::Engine::lp},
                                                               {"tolsa", capacity::Engine::tolsa}};
  o.engine = engines.at(a.engine);
  capacity::CapacityEstimate e;
  if (a.quantity == "alpha") {
    e = capacity::alpha_evaluate(s, o);
  } else if (o.engine == capacity::Engine::tolsa && !a.measure.empty()) {
    e = capacity::tolsa_lower_bound(s, io::load_measure(a.measure), {}, o.tolsa);
  } else {
    e = capacity::gamma_estimate(s, o);
  }
  run.results = {{"value", e.value}, {"kind", capacity::kind_name(e.kind)}};
  run.emit(a.out, dump(io::to_json(e)));
}

// ---------------------------------------------------------------------------
// julia

struct JuliaArgs {
  std::string c = "0", depths = "6-13", scales, method = "angles", out = "-";
  int depth = 10, inverse_depth = 48;
  std::size_t n = 10000;
};

void add_julia(CLI::App& app, JuliaArgs& a, CLI::App*& trace, CLI::App*& sample, CLI::App*& length, CLI::App*& dim) {
  auto* j = app.add_subcommand("julia", "Julia sets of z^2 + c: traces, harmonic-measure samples, length and dimension");
  j->require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--c", a.c, "Parameter c as re,im or a+bi")->capture_default_str();
    s->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
  };
  trace = j->add_subcommand("trace", "Boundary trace through 2^depth external angles (CSV)");
  common(trace);
  trace->add_option("--depth", a.depth, "log2 of the number of angles")->capture_default_str();
  sample = j->add_subcommand("sample", "Harmonic-measure samples (CSV re,im,weight)");
  common(sample);
  sample->add_option("--n", a.n, "Number of samples")->capture_default_str();
  sample->add_option("--method", a.method, "angles (external-angle pushforward) or inverse (inverse iteration)")
      ->check(CLI::IsMember({"angles", "inverse"}))
      ->capture_default_str();
  sample->add_option("--depth", a.inverse_depth, "Backward steps for --method inverse")->capture_default_str();
  length = j->add_subcommand("length", "Discrete trace length per depth (CSV)");
  common(length);
  length->add_option("--depths", a.depths, "Depths, e.g. 6-13 or 8,10,12")->capture_default_str();
  dim = j->add_subcommand("dim", "Box-counting dimension of a trace (JSON)");
  common(dim);
  dim->add_option("--depth", a.depth, "log2 of the number of trace points")->capture_default_str();
  dim->add_option("--scales", a.scales, "Box sizes, comma separated (default 2^-2..2^-9)");
}

void run_julia(const std::string& which, const JuliaArgs& a, cli::Run& run) {
  const auto p = julia::params(cli::parse_complex(a.c));
  if (which == "trace") {
    if (a.depth < 2 || a.depth > 24) throw InputError("--depth must lie in [2, 24]");
    const std::size_t n = std::size_t{1} << a.depth;
    const auto tr = julia::trace_julia(p, n);
    io::CsvWriter w({"k", "angle", "re", "im"});
    for (std::size_t k = 0; k < n; ++k)
      w.row({std::to_string(k), io::fmt(kTwoPi * static_cast<double>(k) / static_cast<double>(n)), io::fmt(tr.points[k].real()),
             io::fmt(tr.points[k].imag())});
    run.emit(a.out, w.str());
  } else if (which == "sample") {
    const auto m = a.method == "angles" ? julia::harmonic_samples(p, a.n, run.seed.value)
                                        : julia::inverse_iteration_samples(p, a.n, a.inverse_depth, run.seed.value);
    io::CsvWriter w({"re", "im", "weight"});
    for (std::size_t i = 0; i < m.size(); ++i) w.row({io::fmt(m.atoms()[i].real()), io::fmt(m.atoms()[i].imag()), io::fmt(m.weights()[i])});
    run.emit(a.out, w.str());
  } else if (which == "length") {
    const auto depths = cli::parse_int_ranges(a.depths);
    io::CsvWriter w({"depth", "n_angles", "length"});
    for (const auto& r : julia::length_growth(p, depths)) w.row({std::to_string(r.depth), std::to_string(r.n_angles), io::fmt(r.length)});
    run.emit(a.out, w.str());
  } else {
    if (a.depth < 2 || a.depth > 24) throw InputError("--depth must lie in [2, 24]");
    const auto tr = julia::trace_julia(p, std::size_t{1} << a.depth);
    const auto scales = a.scales.empty() ? default_box_scales() : cli::parse_real_list(a.scales);
    const auto d = julia::box_dimension(tr.points, scales);
    json j;
    j["c"] = io::to_json(p.c);
    j["points"] = tr.size();
    j["dimension"] = d.dimension;
    j["r_squared"] = d.r_squared;
    j["resolved_scales"] = d.resolved_count;
    j["scales"] = json::array();
    for (const auto& s : d.scales) j["scales"].push_back({{"delta", s.delta}, {"boxes", s.boxes}, {"resolved", s.resolved}});
    run.results = {{"dimension", d.dimension}};
    run.emit(a.out, dump(j));
  }
}

// ---------------------------------------------------------------------------
// curvature

struct CurvatureArgs {
  std::string measure, set, out = "-";
  std::size_t n = 200, max_atoms = 3000;
  bool per_atom = false;
};

void add_curvature(CLI::App& app, CurvatureArgs& a) {
  auto* c = app.add_subcommand("curvature", "Menger curvature of a discrete measure and its Tolsa potential");
  c->add_option("--measure", a.measure, "Measure file");
  c->add_option("--set", a.set, "Set file; its default measure is used when --measure is absent");
  c->add_option("--n", a.n, "Atoms of the default measure")->capture_default_str();
  c->add_option("--max-atoms", a.max_atoms, "Refuse measures with more atoms (the kernel is cubic)")->capture_default_str();
  c->add_flag("--per-atom", a.per_atom, "Emit the per-atom table as CSV instead of the JSON report");
  c->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
}

void run_curvature(const CurvatureArgs& a, cli::Run& run) {
  if (a.measure.empty() == a.set.empty()) throw InputError("give exactly one of --measure and --set");
  const auto m = a.measure.empty() ? capacity::default_measure(load_set_arg(a.set), a.n) : io::load_measure(a.measure);
  menger::KernelOptions k;
  k.max_atoms = a.max_atoms;
  const auto grid = capacity::default_tolsa_grid(m);
  const auto rep = menger::tolsa_potential(m, grid, true, k);
  if (a.per_atom) {
    io::CsvWriter w({"re", "im", "weight", "curvature_energy"});
    for (std::size_t i = 0; i < m.size(); ++i)
      w.row({io::fmt(m.atoms()[i].real()), io::fmt(m.atoms()[i].imag()), io::fmt(m.weights()[i]), io::fmt(rep.atom_energy[i])});
    run.emit(a.out, w.str());
  } else {
    json j;
    j["atoms"] = m.size();
    j["mass"] = measures::total_mass(m);
    j["total_curvature"] = rep.total;
    j["query_points"] = grid.size();
    j["max_potential"] = rep.max_potential;
    j["argmax"] = io::to_json(rep.query[rep.argmax]);
    j["note"] = "potential maximized over atoms, neighbour midpoints and dilated copies only";
    run.results = {{"total_curvature", rep.total}};
    run.emit(a.out, dump(j));
  }
}

// ---------------------------------------------------------------------------
// measures

struct MeasureArgs {
  std::string measure, set, at, radii, out = "-";
  std::vector<std::string> points;
  std::size_t n = 200;
  bool csv = false;
};

void add_measures(CLI::App& app, MeasureArgs& a, CLI::App*& density, CLI::App*& maximal, CLI::App*& from_set) {
  auto* m = app.add_subcommand("measures", "Discrete measures: densities, maximal function, default measures");
  m->require_subcommand(1);
  density = m->add_subcommand("density", "Ratios mu(B(x,r))/r on a decreasing radius grid (JSON, or CSV with --csv)");
  density->add_option("--measure", a.measure, "Measure file")->required();
  density->add_option("--at", a.at, "Point x as re,im")->required();
  density->add_option("--radii", a.radii, "Decreasing radii, comma separated")->required();
  density->add_flag("--csv", a.csv, "Emit only the r,ratio table");
  density->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
  maximal = m->add_subcommand("maximal", "Radial maximal function at points (CSV)");
  maximal->add_option("--measure", a.measure, "Measure file")->required();
  maximal->add_option("--at", a.points, "Point as re,im (repeatable)")->required();
  maximal->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
  from_set = m->add_subcommand("from-set", "Default measure on a set (JSON)");
  from_set->add_option("--set", a.set, "Set file")->required();
  from_set->add_option("--n", a.n, "Atoms")->capture_default_str();
  from_set->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
}

void run_measures(const std::string& which, const MeasureArgs& a, cli::Run& run) {
  if (which == "from-set") {
    run.emit(a.out, dump(io::to_json(capacity::default_measure(load_set_arg(a.set), a.n))));
    return;
  }
  const auto m = io::load_measure(a.measure);
  if (which == "density") {
    const auto t = measures::linear_density(m, cli::parse_complex(a.at), cli::parse_real_list(a.radii));
    if (a.csv) {
      io::CsvWriter w({"r", "ratio"});
      for (const auto& r : t.rows) w.row({io::fmt(r.r), io::fmt(r.ratio)});
      run.emit(a.out, w.str());
      return;
    }
    json j;
    j["rows"] = json::array();
    for (const auto& r : t.rows) j["rows"].push_back({{"r", r.r}, {"ratio", r.ratio}});
    j["theta"] = t.theta;
    j["theta_upper"] = t.theta_upper;
    j["divergent"] = t.divergent;
    j["note"] = t.note;
    run.emit(a.out, dump(j));
  } else {
    io::CsvWriter w({"re", "im", "maximal"});
    for (const auto& s : a.points) {
      const cplx x = cli::parse_complex(s);
      w.row({io::fmt(x.real()), io::fmt(x.imag()), io::fmt(measures::maximal_function(m, x))});
    }
    run.emit(a.out, w.str());
  }
}

// ---------------------------------------------------------------------------
// motion

struct MotionArgs {
  std::string motion = "boettcher", set = "circle", lambdas, obs = "gamma,alpha,length", depths = "8,10,12", offset, zeros,
              zero_list, out = "-";
  std::size_t leja_n = 256, sample_n = 4096;
  int box_depth = 14;
};

void add_motion(CLI::App& app, MotionArgs& a, CLI::App*& scan, CLI::App*& blaschke) {
  auto* m = app.add_subcommand("motion", "Holomorphic motions and observable scans over lambda");
  m->require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--motion", a.motion, "boettcher, identity or translate (inner motion for blaschke)")
        ->check(CLI::IsMember({"boettcher", "identity", "translate"}))
        ->capture_default_str();
    s->add_option("--offset", a.offset, "Translate motion: offset d as re,im");
    s->add_option("--set", a.set, "Base set file, or 'circle'")->capture_default_str();
    s->add_option("--obs", a.obs, "Observables: gamma_leja (gamma), gamma_rules, alpha_rules (alpha), length, box_dim")
        ->capture_default_str();
    s->add_option("--depths", a.depths, "Sampling depths for the length observable")->capture_default_str();
    s->add_option("--box-depth", a.box_depth, "Trace depth for box_dim")->capture_default_str();
    s->add_option("--leja-n", a.leja_n, "Leja points")->capture_default_str();
    s->add_option("--sample-n", a.sample_n, "Samples of the moved set")->capture_default_str();
    s->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
  };
  scan = m->add_subcommand("scan", "Observable table over lambda values (CSV lambda_re,lambda_im,observable,value,kind,notes)");
  common(scan);
  scan->add_option("--lambdas", a.lambdas, "Lambda values, e.g. \"1/2,1/3,0\" or \"0.1+0.2i\"")->required();
  blaschke = m->add_subcommand("blaschke", "Scan of the motion reparametrized by a Blaschke product");
  common(blaschke);
  blaschke->add_option("--zeros", a.zeros, "Zeros file: JSON array of [re, im]");
  blaschke->add_option("--zero-list", a.zero_list, "Zeros inline, comma separated a+bi values");
  blaschke->add_option("--lambdas", a.lambdas, "Lambda values (default: the zeros)");
}

std::vector<std::string> resolve_observables(const std::string& s) {
  std::vector<std::string> out;
  for (auto tok : cli::split(s, ',')) {
    if (tok.empty()) continue;
    if (tok == "gamma") tok = "gamma_leja";
    if (tok == "alpha") tok = "alpha_rules";
    out.push_back(tok);
  }
  return out;
}

void run_motion(const std::string& which, const MotionArgs& a, cli::Run& run) {
  motion::MotionPtr inner;
  if (a.motion == "boettcher") {
    inner = motion::boettcher();
  } else if (a.motion == "identity") {
    inner = motion::identity();
  } else {
    if (a.offset.empty()) throw InputError("--motion translate needs --offset");
    inner = motion::translate_union(motion::boettcher(), motion::boettcher(), cli::parse_complex(a.offset));
  }
  const auto s = load_set_arg(a.set);
  motion::ScanOptions o;
  o.leja_n = a.leja_n;
  o.sample_n = a.sample_n;
  o.length_depths = cli::parse_int_ranges(a.depths);
  o.box_depth = a.box_depth;
  std::vector<cplx> lambdas;
  motion::MotionPtr m = inner;
  if (which == "blaschke") {
    if (a.zeros.empty() == a.zero_list.empty()) throw InputError("give exactly one of --zeros and --zero-list");
    const auto zeros = a.zeros.empty() ? cli::parse_complex_list(a.zero_list) : io::complex_list(io::load_json(a.zeros), a.zeros);
    m = motion::blaschke(inner, zeros);
    lambdas = a.lambdas.empty() ? zeros : cli::parse_complex_list(a.lambdas);
  } else {
    lambdas = cli::parse_complex_list(a.lambdas);
  }
  const auto rows = motion::motion_scan(*m, s, lambdas, resolve_observables(a.obs), o);
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.kind == "error";
  run.results = {{"rows", rows.size()}, {"row_errors", errors}};
  run.emit(a.out, io::scan_csv(rows));
}

// ---------------------------------------------------------------------------
// transforms

struct TransformArgs {
  std::string function = "pole", z0 = "2", origin = "-1,-1", in, f, phi, like, lo = "-1,-1", hi = "1,1", measure, out = "-",
              alternate_out, prefix;
  std::vector<std::string> points;
  double h = 1.0 / 32, side = 0.5;
  std::size_t width = 65, height = 65;
};

void add_transforms(CLI::App& app, TransformArgs& a, std::map<std::string, CLI::App*>& subs) {
  auto* t = app.add_subcommand("transforms", "Grid functions, discrete dbar, Cauchy transforms, Vitushkin localization");
  t->require_subcommand(1);
  auto* s = subs["sample"] = t->add_subcommand("sample", "Sample a built-in function on a grid (binary grid + JSON sidecar)");
  s->add_option("--function", a.function, "pole (1/(z-z0)), z, conj, abs2, square, cauchy-delta (-1/z)")
      ->check(CLI::IsMember({"pole", "z", "conj", "abs2", "square", "cauchy-delta"}))
      ->capture_default_str();
  s->add_option("--z0", a.z0, "Pole location for --function pole")->capture_default_str();
  s->add_option("--origin", a.origin, "Lower-left cell centre")->capture_default_str();
  s->add_option("--spacing", a.h, "Grid spacing h")->capture_default_str();
  s->add_option("--width", a.width, "Cells in x")->capture_default_str();
  s->add_option("--height", a.height, "Cells in y")->capture_default_str();
  s->add_option("--out", a.out, "Output grid path")->required();
  auto* d = subs["dbar"] = t->add_subcommand("dbar", "Centred-difference dbar of a grid; the boundary ring is zeroed");
  d->add_option("--in", a.in, "Input grid")->required();
  d->add_option("--out", a.out, "Output grid path")->required();
  auto* p = subs["partition"] = t->add_subcommand("partition", "Smoothstep partition of unity sampled on a grid");
  p->add_option("--like", a.like, "Grid whose shape the bumps take")->required();
  p->add_option("--lo", a.lo, "Lower-left corner of the bounding box")->capture_default_str();
  p->add_option("--hi", a.hi, "Upper-right corner of the bounding box")->capture_default_str();
  p->add_option("--side", a.side, "Square side")->capture_default_str();
  p->add_option("--prefix", a.prefix, "Output prefix; bump q goes to <prefix>_<q>.bin")->required();
  auto* l = subs["localize"] = t->add_subcommand("localize", "Vitushkin localization V_phi f, both formulas (JSON report)");
  l->add_option("--f", a.f, "Grid of f")->required();
  l->add_option("--phi", a.phi, "Grid of phi")->required();
  l->add_option("--out", a.out, "Grid path for phi f + (1/pi) C(f dbar phi)")->required();
  l->add_option("--alternate-out", a.alternate_out, "Grid path for -(1/pi) C(phi dbar f)");
  auto* c = subs["cauchy"] = t->add_subcommand("cauchy", "Cauchy transform of a measure at points (CSV)");
  c->add_option("--measure", a.measure, "Measure file")->required();
  c->add_option("--at", a.points, "Point as re,im (repeatable)")->required();
  c->add_option("--out", a.out, "Output path, '-' for standard output")->capture_default_str();
}

void run_transforms(const std::string& which, const TransformArgs& a, cli::Run& run) {
  using namespace transforms;
  auto write = [&](const std::string& path, const GridFunction& g) {
    if (path == "-") throw InputError("grids are binary; give a file path");
    write_grid(path, g);
    run.record_file(path);
  };
  if (which == "sample") {
    const cplx z0 = cli::parse_complex(a.z0);
    std::function<cplx(cplx)> f;
    if (a.function == "pole") f = [z0](cplx z) { return 1.0 / (z - z0); };
    else if (a.function == "z") f = [](cplx z) { return z; };
    else if (a.function == "conj") f = [](cplx z) { return std::conj(z); };
    else if (a.function == "abs2") f = [](cplx z) { return cplx(std::norm(z)); };
    else if (a.function == "square") f = [](cplx z) { return z * z; };
    else f = [](cplx z) { return -1.0 / z; };
    auto g = sample(cli::parse_complex(a.origin), a.h, a.width, a.height, f);
    write(a.out, g);
  } else if (which == "dbar") {
    write(a.out, dbar(read_grid(a.in)));
  } else if (which == "partition") {
    const auto like = read_grid(a.like);
    const auto p = make_partition(cli::parse_complex(a.lo), cli::parse_complex(a.hi), a.side);
    const auto bumps = partition_of_unity(p, like);
    for (std::size_t q = 0; q < bumps.size(); ++q) write(a.prefix + "_" + std::to_string(q) + ".bin", bumps[q]);
    run.results = {{"bumps", bumps.size()}, {"squares_x", p.nx}, {"squares_y", p.ny}};
  } else if (which == "localize") {
    const auto v = vitushkin_localize(read_grid(a.f), read_grid(a.phi));
    write(a.out, v.primary);
    if (!a.alternate_out.empty()) write(a.alternate_out, v.alternate);
    run.results = {{"max_formula_difference", v.max_difference},
                   {"note", "the grid truncates f to its bounding box; the truncation error is not separated out"}};
    std::cout << dump(run.results);
  } else {
    const auto m = io::load_measure(a.measure);
    io::CsvWriter w({"re", "im", "value_re", "value_im"});
    for (const auto& s : a.points) {
      const cplx z = cli::parse_complex(s);
      const cplx v = cauchy_transform_measure(m, z);
      w.row({io::fmt(z.real()), io::fmt(z.imag()), io::fmt(v.real()), io::fmt(v.imag())});
    }
    run.emit(a.out, w.str());
  }
}

// ---------------------------------------------------------------------------
// classify, props

struct ClassifyArgs {
  std::string set, out = "-";
};

struct PropsArgs {
  std::string suite = "all", out = "-";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caplab: numerical experiments with analytic capacity, continuous analytic capacity and Julia sets"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);  // --version must work alone
  app.fallthrough();  // global flags may also follow the subcommand
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = one per logical core)")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed (fallback: CAPLAB_SEED, then 1)");
  app.add_option("--manifest", g.manifest, "Also write the run manifest to this path");

  CapacityArgs cap;
  add_capacity(app, cap);
  JuliaArgs jul;
  CLI::App *j_trace, *j_sample, *j_length, *j_dim;
  add_julia(app, jul, j_trace, j_sample, j_length, j_dim);
  CurvatureArgs cur;
  add_curvature(app, cur);
  MeasureArgs mea;
  CLI::App *m_density, *m_maximal, *m_from;
  add_measures(app, mea, m_density, m_maximal, m_from);
  MotionArgs mot;
  CLI::App *mo_scan, *mo_blaschke;
  add_motion(app, mot, mo_scan, mo_blaschke);
  TransformArgs tra;
  std::map<std::string, CLI::App*> tsubs;
  add_transforms(app, tra, tsubs);
  ClassifyArgs cls;
  auto* classify = app.add_subcommand("classify", "Classify a Jordan curve against the equivalent-condition graph (JSON)");
  classify->add_option("--set", cls.set, "Set file, or 'circle'")->required();
  classify->add_option("--out", cls.out, "Output path, '-' for standard output")->capture_default_str();
  PropsArgs pr;
  auto* props_cmd = app.add_subcommand("props", "Run property suites (JSON); exit 1 if any check fails");
  std::vector<std::string> suites = props::suite_names();
  suites.push_back("all");
  props_cmd->add_option("--suite", pr.suite, "Suite name or 'all'")->check(CLI::IsMember(suites))->capture_default_str();
  props_cmd->add_option("--out", pr.out, "Output path, '-' for standard output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    if (const auto hint = cli::suggestion(app, argc, argv); !hint.empty()) std::cerr << hint << "\n";
    return 2;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << "A subcommand is required\nRun with --help for more information.\n";
    return 2;
  }

  try {
    set_thread_count(g.threads);
    const CLI::App* top = app.get_subcommands().front();
    std::string command = top->get_name();
    std::string leaf;
    if (!top->get_subcommands().empty()) {
      leaf = top->get_subcommands().front()->get_name();
      command += " " + leaf;
    }
    cli::Run run(command);
    run.seed = cli::resolve_seed(g.seed);
    run.manifest_path = g.manifest;
    run.params = cli::collect_params(top);

    int status = 0;
    if (top->get_name() == "capacity") {
      run_capacity(cap, run);
    } else if (top->get_name() == "julia") {
      run_julia(leaf, jul, run);
    } else if (top->get_name() == "curvature") {
      run_curvature(cur, run);
    } else if (top->get_name() == "measures") {
      run_measures(leaf, mea, run);
    } else if (top->get_name() == "motion") {
      run_motion(leaf, mot, run);
    } else if (top->get_name() == "transforms") {
      run_transforms(leaf, tra, run);
    } else if (top->get_name() == "classify") {
      run.emit(cls.out, dump(io::to_json(capacity::classify_jordan_curve(load_set_arg(cls.set)))));
    } else {
      json out = json::array();
      bool ok = true;
      for (const auto& name : props::suite_names()) {
        if (pr.suite != "all" && pr.suite != name) continue;
        const auto rep = props::run_suite(name, run.seed.value);
        ok = ok && rep.passed();
        out.push_back(props::to_json(rep));
      }
      run.results = {{"passed", ok}};
      run.emit(pr.out, dump(pr.suite == "all" ? out : out.front()));
      status = ok ? 0 : 1;
    }
    run.finish();
    return status;
  } catch (const InputError& e) {
    std::cerr << "caplab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "caplab: " << e.what() << "\n";
    return 1;
  }
}
