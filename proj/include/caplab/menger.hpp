#ifndef CAPLAB_MENGER_HPP
#define CAPLAB_MENGER_HPP

// Menger curvature of triples, curvature energies of discrete measures and
// the potential U_μ = Mμ + c_μ.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "measures.hpp"
#include "parallel.hpp"

namespace caplab::menger {

using measures::DiscreteMeasure;

/// Reciprocal circumradius, 4·Area/(|x−y||y−z||z−x|). Collinear and repeated
/// points give 0; the test 4·Area < 1e-14·(product of sides) keeps nearly
/// flat triples from amplifying rounding noise. The points are put in
/// lexicographic order first so all six argument orders round identically.
inline double menger_curvature(cplx x, cplx y, cplx z) {
  auto less = [](cplx p, cplx q) { return p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag()); };
  if (less(y, x)) std::swap(x, y);
  if (less(z, y)) std::swap(y, z);
  if (less(y, x)) std::swap(x, y);
  const double a = std::abs(x - y), b = std::abs(y - z), c = std::abs(z - x);
  const double prod = a * b * c;
  if (prod == 0.0) return 0.0;
  const double four_area = 2.0 * std::abs(cross(y - x, z - x));
  if (four_area < 1e-14 * prod) return 0.0;
  return four_area / prod;
}

/// c_μ(x)² = Σ_y Σ_z w_y w_z c(x,y,z)².
inline double curvature_energy(const DiscreteMeasure& m, cplx x) {
  const auto& a = m.atoms();
  const auto& w = m.weights();
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double c = menger_curvature(x, a[j], a[k]);
      row += w[k] * c * c;
    }
    s += w[j] * row;
  }
  return 2.0 * s;  // ordered pairs (y,z) and (z,y); the diagonal vanishes
}

struct KernelOptions {
  std::size_t max_atoms = 3000;  // O(n³) guard
  std::size_t block = 256;
};

/// c²(μ) = Σ_x w_x c_μ(x)² evaluated as 6 Σ_{i<j<k} w_i w_j w_k c². The
/// outer index runs in parallel; each index owns its partial sum and the
/// partials are added in index order, so the value does not depend on the
/// thread count.
inline double total_curvature(const DiscreteMeasure& m, const KernelOptions& opt = {}) {
  const std::size_t n = m.size();
  if (n > opt.max_atoms)
    throw Error("total_curvature: " + std::to_string(n) + " atoms exceeds the cap of " +
                std::to_string(opt.max_atoms) + "; subsample the measure or raise the cap");
  const auto& a = m.atoms();
  const auto& w = m.weights();
  const std::size_t bs = std::max<std::size_t>(1, opt.block);
  std::vector<double> partial(n, 0.0);
  parallel_for(
      n,
      [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
          double row = 0.0;
          for (std::size_t k0 = j + 1; k0 < n; k0 += bs) {
            const std::size_t k1 = std::min(n, k0 + bs);
            double blk = 0.0;
            for (std::size_t k = k0; k < k1; ++k) {
              const double c = menger_curvature(a[i], a[j], a[k]);
              blk += w[k] * c * c;
            }
            row += blk;
          }
          acc += w[j] * row;
        }
        partial[i] = w[i] * acc;
      },
      1);
  double total = 0.0;
  for (double p : partial) total += p;
  return 6.0 * total;
}

struct CurvatureReport {
  std::vector<double> atom_energy;   // c_μ(x)² at each atom
  double total = 0.0;                // Σ w_x c_μ(x)²
  std::vector<cplx> query;
  std::vector<double> maximal;       // Mμ at each query point (may be +∞)
  std::vector<double> curvature;     // c_μ at each query point
  std::vector<double> potential;     // U_μ = Mμ + c_μ (may be +∞)
  double max_potential = 0.0;
  std::size_t argmax = 0;
};

inline std::vector<double> atom_energies(const DiscreteMeasure& m, const KernelOptions& opt = {}) {
  if (m.size() > opt.max_atoms)
    throw Error("curvature report: " + std::to_string(m.size()) + " atoms exceeds the cap of " +
                std::to_string(opt.max_atoms) + "; subsample the measure or raise the cap");
  std::vector<double> e(m.size());
  parallel_for(m.size(), [&](std::size_t i) { e[i] = curvature_energy(m, m.atoms()[i]); }, 1);
  return e;
}

/// U_μ on the query points. With `with_atoms` the per-atom energies and the
/// total are filled in too (O(n³)).
inline CurvatureReport tolsa_potential(const DiscreteMeasure& m, std::span<const cplx> query, bool with_atoms = false,
                                       const KernelOptions& opt = {}) {
  if (query.empty()) throw Error("tolsa_potential: empty query set");
  CurvatureReport r;
  if (with_atoms) {
    r.atom_energy = atom_energies(m, opt);
    for (std::size_t i = 0; i < m.size(); ++i) r.total += m.weights()[i] * r.atom_energy[i];
  }
  const std::size_t q = query.size();
  r.query.assign(query.begin(), query.end());
  r.maximal.resize(q);
  r.curvature.resize(q);
  r.potential.resize(q);
  parallel_for(q, [&](std::size_t i) {
    r.maximal[i] = measures::maximal_function(m, query[i]);
    r.curvature[i] = std::sqrt(curvature_energy(m, query[i]));
    r.potential[i] = r.maximal[i] + r.curvature[i];
  }, 4);
  for (std::size_t i = 0; i < q; ++i)
    if (r.potential[i] > r.max_potential || i == 0) {
      r.max_potential = r.potential[i];
      r.argmax = i;
    }
  return r;
}

}  // namespace caplab::menger

#endif  // CAPLAB_MENGER_HPP
