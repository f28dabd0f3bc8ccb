#ifndef CAPLAB_LP_ENGINE_HPP
#define CAPLAB_LP_ENGINE_HPP

// Lower bounds for analytic capacity by explicit competitors: maximize
// Re f'(∞) over f in a finite-dimensional space of functions analytic off
// the set, subject to |f| ≤ 1 on boundary samples.
//
// Disk components carry Laurent terms (η/(z − w))^p around the given poles.
// Segments have no interior, so point poles there would be unbounded; the
// poles on a segment become mesh nodes of a continuous piecewise-linear
// charge density whose Cauchy transform is bounded off the segment.
//
// Normalizing g'(∞) = 1 turns the problem into a complex Chebyshev problem
// min max_i |g(z_i)|, solved by Lawson's iteratively reweighted least
// squares; a cutting-plane loop checks a 4x refined sample and adds the
// violated points.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "sets.hpp"

namespace caplab::lp {

struct Options {
  int degree = 1;
  std::size_t boundary_n = 2000;  // samples per disk, per side of a segment
  double violation_tol = 1e-4;
  int max_rounds = 12;
  int max_iter = 6000;
  double gap_tol = 2e-4;    // stop once max|g| ≤ (1+gap_tol) × weighted-L2 lower bound
  double gap_fail = 1e-2;   // give up (error) if the final gap is larger than this
};

struct Result {
  double value = 0.0;                 // certified lower bound 1 / max_{S∪R}|g|
  double solve_value = 0.0;           // 1 / max_S|g| before the refined check
  double dual_bound = 0.0;            // upper bound on the optimum over this function space
  double max_abs_f_refined = 0.0;     // max |g|/max_S|g| on the refined sample
  double violation = 0.0;
  int rounds = 0;
  int iterations = 0;
  std::size_t constraints = 0;
  std::size_t basis_size = 0;
  std::vector<cplx> poles;
  std::vector<cplx> coefficients;
};

namespace detail {

struct DiskComp {
  cplx center;
  double radius;
};
struct SegComp {
  cplx a, b;
  std::vector<double> mesh;  // parameter nodes in [0,1]
};

struct Sample {
  cplx z;
  int seg = -1;   // index of the segment the point lies on, or -1
  int side = 0;   // +1 left of a→b, −1 right
  double u = 0;   // segment parameter when seg >= 0
};

struct Basis {
  int kind = 0;  // 0 = disk pole power, 1 = segment hat
  cplx pole;
  double eta = 1;
  int power = 1;
  int seg = -1;
  double t0 = 0, t1 = 0, t2 = 0;
  cplx inf_coeff;  // coefficient of 1/z at infinity
};

inline void flatten(const sets::SetSpec& s, std::vector<DiskComp>& disks, std::vector<SegComp>& segs) {
  if (s.is<sets::Disk>()) {
    disks.push_back({s.as<sets::Disk>().center, s.as<sets::Disk>().radius});
  } else if (s.is<sets::Segment>()) {
    const auto& g = s.as<sets::Segment>();
    if (g.a == g.b) throw Error("lp engine: degenerate segment");
    segs.push_back({g.a, g.b, {}});
  } else if (s.is<sets::Union>()) {
    for (const auto& m : s.as<sets::Union>().members) flatten(m, disks, segs);
  } else {
    throw Error(std::string("lp engine: only disks, segments and their unions are supported, got ") + sets::kind_name(s));
  }
}

/// ∫ hat(t)/(t − u) dt for the hat rising on [t0,t1] and falling on [t1,t2].
/// On-segment points (seg_side ≠ 0, u real) take the boundary value from
/// the given side.
inline cplx hat_transform(double t0, double t1, double t2, cplx u, int seg_side) {
  auto log_ratio = [&](double lo, double hi) -> cplx {
    if (seg_side != 0 && u.real() > lo && u.real() < hi) {
      const double x = u.real();
      return {std::log((hi - x) / (x - lo)), seg_side * kPi};
    }
    return std::log((hi - u) / (lo - u));
  };
  const double d1 = t1 - t0, d2 = t2 - t1;
  const cplx rising = 1.0 + (u - t0) / d1 * log_ratio(t0, t1);
  const cplx falling = -1.0 + (t2 - u) / d2 * log_ratio(t1, t2);
  return rising + falling;
}

inline cplx eval_basis(const Basis& b, const Sample& s, const std::vector<SegComp>& segs) {
  if (b.kind == 0) return std::pow(b.eta / (s.z - b.pole), b.power);
  const SegComp& g = segs[b.seg];
  if (s.seg == b.seg) {
    double u = s.u;
    // keep exactly-on-node samples off the removable log singularity
    for (double t : {b.t0, b.t1, b.t2})
      if (std::abs(u - t) < 1e-12) u = t + 1e-9;
    return hat_transform(b.t0, b.t1, b.t2, u, s.side);
  }
  return hat_transform(b.t0, b.t1, b.t2, (s.z - g.a) / (g.b - g.a), 0);
}

inline void add_samples(std::vector<Sample>& out, const std::vector<DiskComp>& disks, const std::vector<SegComp>& segs,
                        std::size_t n, double phase) {
  for (const auto& d : disks)
    for (std::size_t i = 0; i < n; ++i)
      out.push_back({d.center + std::polar(d.radius, kTwoPi * (static_cast<double>(i) + phase) / static_cast<double>(n))});
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& g = segs[s];
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(i) + phase) / static_cast<double>(n);
      for (int side : {+1, -1}) out.push_back({g.a + u * (g.b - g.a), static_cast<int>(s), side, u});
    }
  }
}

inline Eigen::MatrixXcd design(const std::vector<Sample>& smp, const std::vector<Basis>& basis,
                               const std::vector<SegComp>& segs) {
  Eigen::MatrixXcd A(smp.size(), basis.size());
  parallel_for(smp.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < basis.size(); ++k) A(i, k) = eval_basis(basis[k], smp[i], segs);
  }, 256);
  return A;
}

inline std::string dump(const Eigen::VectorXcd& a) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index k = 0; k < a.size(); ++k) os << (k ? ", " : "") << format_complex(a[k]);
  os << "]";
  return os.str();
}

}  // namespace detail

/// Disk centres and segment midpoints.
inline std::vector<cplx> default_poles(const sets::SetSpec& s) {
  std::vector<detail::DiskComp> disks;
  std::vector<detail::SegComp> segs;
  detail::flatten(s, disks, segs);
  std::vector<cplx> p;
  for (const auto& d : disks) p.push_back(d.center);
  for (const auto& g : segs) p.push_back(0.5 * (g.a + g.b));
  return p;
}

inline Result lp_lower_bound(const sets::SetSpec& set, const std::vector<cplx>& poles, const Options& opt = {}) {
  using namespace detail;
  if (opt.degree < 1) throw Error("lp engine: degree must be >= 1");
  if (opt.boundary_n < 8) throw Error("lp engine: boundary_n must be >= 8");
  if (poles.empty()) throw Error("lp engine: no poles given");
  std::vector<DiskComp> disks;
  std::vector<SegComp> segs;
  flatten(set, disks, segs);

  // attach every pole to a component
  std::vector<Basis> basis;
  for (auto w : poles) {
    bool placed = false;
    for (const auto& d : disks) {
      const double eta = d.radius - std::abs(w - d.center);
      if (eta > 0) {
        for (int p = 1; p <= opt.degree; ++p)
          basis.push_back({0, w, eta, p, -1, 0, 0, 0, p == 1 ? cplx{eta, 0} : cplx{}});
        placed = true;
        break;
      }
    }
    if (placed) continue;
    for (auto& g : segs) {
      const double len = std::abs(g.b - g.a);
      if (sets::distance_to_segment(w, g.a, g.b) <= 1e-12 * len) {
        g.mesh.push_back(std::clamp(((w - g.a) * std::conj(g.b - g.a)).real() / (len * len), 0.0, 1.0));
        placed = true;
        break;
      }
    }
    if (!placed)
      throw Error("lp engine: infeasible pole placement, " + format_complex(w) +
                  " is neither inside a disk nor on a segment of the set");
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    auto& g = segs[s];
    if (g.mesh.empty()) continue;
    std::vector<double> nodes = g.mesh;
    nodes.push_back(0.0);
    nodes.push_back(1.0);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(), [](double x, double y) { return y - x < 1e-12; }), nodes.end());
    std::vector<double> mesh{nodes.front()};
    for (std::size_t i = 1; i < nodes.size(); ++i)
      for (int k = 1; k <= opt.degree; ++k)
        mesh.push_back(nodes[i - 1] + (nodes[i] - nodes[i - 1]) * k / opt.degree);
    mesh.back() = 1.0;
    g.mesh = mesh;
    const cplx e = g.b - g.a;
    for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
      const double mass = 0.5 * (mesh[i + 1] - mesh[i - 1]);
      basis.push_back({1, g.a + mesh[i] * e, 1, 1, static_cast<int>(s), mesh[i - 1], mesh[i], mesh[i + 1], -mass * e});
    }
  }
  if (basis.empty()) throw Error("lp engine: no basis functions (a segment needs an interior mesh node)");

  Eigen::VectorXcd c(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) c[k] = basis[k].inf_coeff;
  if (c.norm() == 0.0) throw Error("lp engine: no basis function has a 1/z term at infinity");

  std::vector<Sample> S;
  add_samples(S, disks, segs, opt.boundary_n, 0.5);
  std::vector<Sample> R;
  add_samples(R, disks, segs, 4 * opt.boundary_n, 0.25);
  const Eigen::MatrixXcd AR = design(R, basis, segs);
  Eigen::MatrixXcd A = design(S, basis, segs);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(A.rows(), 1.0 / A.rows());

  Result res;
  res.poles = poles;
  res.basis_size = basis.size();
  Eigen::VectorXcd a;
  double mx = 0, l2 = 0;
  for (int round = 1;; ++round) {
    res.rounds = round;
    for (int it = 0; it < opt.max_iter; ++it) {
      ++res.iterations;
      const Eigen::MatrixXcd B = w.cwiseSqrt().asDiagonal() * A;
      const Eigen::MatrixXcd G = B.adjoint() * B;
      Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
      if (ldlt.info() != Eigen::Success) throw Error("lp engine: singular normal equations");
      const Eigen::VectorXcd y = ldlt.solve(c.conjugate());
      a = y / (c.transpose() * y).value();
      const Eigen::VectorXd g = (A * a).cwiseAbs();
      mx = g.maxCoeff();
      l2 = std::sqrt((w.array() * g.array().square()).sum());
      if (!std::isfinite(mx)) throw Error("lp engine: non-finite iterate " + dump(a));
      if (mx <= l2 * (1.0 + opt.gap_tol)) break;
      w = w.cwiseProduct(g);
      w /= w.sum();
    }
    if (mx > l2 * (1.0 + opt.gap_fail))
      throw Error("lp engine: Chebyshev iteration did not converge (max " + std::to_string(mx) + ", lower bound " +
                  std::to_string(l2) + "); iterate " + dump(a));
    const Eigen::VectorXd gr = (AR * a).cwiseAbs();
    const double ratio = gr.maxCoeff() / mx;
    res.violation = std::max(0.0, ratio - 1.0);
    res.max_abs_f_refined = ratio;
    if (res.violation < opt.violation_tol) break;
    if (round >= opt.max_rounds)
      throw Error("lp engine: cutting planes did not reach violation " + std::to_string(opt.violation_tol) + " (" +
                  std::to_string(res.violation) + ") after " + std::to_string(round) + " rounds; iterate " + dump(a));
    // add the violated refined points as new constraints
    std::vector<Eigen::Index> add;
    for (Eigen::Index i = 0; i < gr.size(); ++i)
      if (gr[i] > mx) add.push_back(i);
    const Eigen::Index old = A.rows();
    A.conservativeResize(old + static_cast<Eigen::Index>(add.size()), Eigen::NoChange);
    w.conservativeResize(old + static_cast<Eigen::Index>(add.size()));
    const double wmean = 1.0 / static_cast<double>(old);
    for (std::size_t k = 0; k < add.size(); ++k) {
      A.row(old + static_cast<Eigen::Index>(k)) = AR.row(add[k]);
      w[old + static_cast<Eigen::Index>(k)] = wmean;
      S.push_back(R[add[k]]);
    }
    w /= w.sum();
  }
  res.constraints = static_cast<std::size_t>(A.rows());
  res.solve_value = 1.0 / mx;
  res.value = res.solve_value / (1.0 + res.violation);
  res.dual_bound = 1.0 / l2;
  res.coefficients.assign(a.data(), a.data() + a.size());
  return res;
}

}  // namespace caplab::lp

#endif  // CAPLAB_LP_ENGINE_HPP
