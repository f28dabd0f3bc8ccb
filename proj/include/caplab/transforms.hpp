#ifndef CAPLAB_TRANSFORMS_HPP
#define CAPLAB_TRANSFORMS_HPP

// Grid functions, the discrete ∂̄ operator, Cauchy transforms and Vitushkin's
// localization operator V_φ f = φf + (1/π) C(f ∂̄φ).

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "core.hpp"
#include "measures.hpp"
#include "parallel.hpp"

namespace caplab::transforms {

/// Cell (i, j) sits at origin + h·i + i·h·j; values are row-major (j major).
/// `flagged` marks cells whose value is not meaningful (e.g. the boundary
/// ring after differencing); empty means none.
struct GridFunction {
  cplx origin;
  double h = 1.0;
  std::size_t width = 0, height = 0;
  std::vector<cplx> values;
  std::vector<std::uint8_t> flagged;

  cplx point(std::size_t i, std::size_t j) const {
    return origin + cplx(h * static_cast<double>(i), h * static_cast<double>(j));
  }
  cplx& at(std::size_t i, std::size_t j) { return values[j * width + i]; }
  cplx at(std::size_t i, std::size_t j) const { return values[j * width + i]; }
  bool is_flagged(std::size_t i, std::size_t j) const { return !flagged.empty() && flagged[j * width + i]; }
  bool interior(std::size_t i, std::size_t j) const { return i > 0 && j > 0 && i + 1 < width && j + 1 < height; }
  std::size_t size() const { return values.size(); }

  void check() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid: spacing must be positive");
    if (width < 2 || height < 2) throw InputError("grid: dimensions must be at least 2");
    if (values.size() != width * height) throw InputError("grid: value count does not match the dimensions");
    if (!flagged.empty() && flagged.size() != values.size()) throw InputError("grid: flag count does not match");
    for (auto v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("grid: non-finite value");
  }
};

inline GridFunction make_grid(cplx origin, double h, std::size_t width, std::size_t height) {
  GridFunction g{origin, h, width, height, std::vector<cplx>(width * height), {}};
  g.check();
  return g;
}

inline GridFunction sample(cplx origin, double h, std::size_t width, std::size_t height,
                           const std::function<cplx(cplx)>& f) {
  GridFunction g = make_grid(origin, h, width, height);
  for (std::size_t j = 0; j < height; ++j)
    for (std::size_t i = 0; i < width; ++i) g.at(i, j) = f(g.point(i, j));
  g.check();
  return g;
}

inline bool compatible(const GridFunction& a, const GridFunction& b) {
  return a.origin == b.origin && a.h == b.h && a.width == b.width && a.height == b.height;
}

inline void require_compatible(const GridFunction& a, const GridFunction& b, const char* what) {
  if (!compatible(a, b)) throw Error(std::string(what) + ": incompatible grids (origin, spacing or dimensions differ)");
}

/// a + s·b; flags are merged.
inline GridFunction axpy(const GridFunction& a, cplx s, const GridFunction& b) {
  require_compatible(a, b, "axpy");
  GridFunction r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] += s * b.values[k];
  if (!b.flagged.empty()) {
    if (r.flagged.empty()) r.flagged.assign(r.size(), 0);
    for (std::size_t k = 0; k < r.size(); ++k) r.flagged[k] |= b.flagged[k];
  }
  return r;
}

inline GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "multiply");
  GridFunction r = axpy(a, 0.0, b);
  for (std::size_t k = 0; k < r.size(); ++k) r.values[k] = a.values[k] * b.values[k];
  return r;
}

/// max |g| over interior, unflagged cells.
inline double max_abs_interior(const GridFunction& g) {
  double m = 0.0;
  for (std::size_t j = 1; j + 1 < g.height; ++j)
    for (std::size_t i = 1; i + 1 < g.width; ++i)
      if (!g.is_flagged(i, j)) m = std::max(m, std::abs(g.at(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// ∂̄ and Cauchy transforms

/// (∂_x + i∂_y)/2 by centred differences; the outer ring is flagged and set to 0.
inline GridFunction dbar(const GridFunction& g) {
  g.check();
  GridFunction r = g;
  r.flagged.assign(g.size(), 0);
  const double inv = 1.0 / (4.0 * g.h);
  for (std::size_t j = 0; j < g.height; ++j)
    for (std::size_t i = 0; i < g.width; ++i) {
      if (!g.interior(i, j) || g.is_flagged(i - 1, j) || g.is_flagged(i + 1, j) || g.is_flagged(i, j - 1) ||
          g.is_flagged(i, j + 1)) {
        r.at(i, j) = 0.0;
        r.flagged[j * g.width + i] = 1;
        continue;
      }
      const cplx dx = g.at(i + 1, j) - g.at(i - 1, j);
      const cplx dy = g.at(i, j + 1) - g.at(i, j - 1);
      r.at(i, j) = (dx + cplx(0, 1) * dy) * inv;
    }
  return r;
}

/// Σ_j w_j / (ζ_j − z).
inline cplx cauchy_transform_measure(const measures::DiscreteMeasure& m, cplx z) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const cplx d = m.atoms()[i] - z;
    if (std::abs(d) <= 1e-12) throw Error("cauchy transform: " + format_complex(z) + " is an atom of the measure");
    s += m.weights()[i] / d;
  }
  return s;
}

/// C(g)(z) at every cell centre, each cell an atom of mass g·h²; the
/// target's own cell is skipped (its principal value vanishes by symmetry).
/// Flagged cells of g carry no mass.
inline GridFunction cauchy_grid(const GridFunction& g) {
  g.check();
  struct Src {
    cplx z, mass;
    std::size_t k;
  };
  std::vector<Src> src;
  const double area = g.h * g.h;
  for (std::size_t j = 0; j < g.height; ++j)
    for (std::size_t i = 0; i < g.width; ++i)
      if (!g.is_flagged(i, j) && g.at(i, j) != cplx{}) src.push_back({g.point(i, j), g.at(i, j) * area, j * g.width + i});
  GridFunction r = g;
  r.flagged.clear();
  parallel_for(g.size(), [&](std::size_t k) {
    const cplx z = g.point(k % g.width, k / g.width);
    cplx s = 0.0;
    for (const auto& c : src)
      if (c.k != k) s += c.mass / (c.z - z);
    r.values[k] = s;
  }, 16);
  return r;
}

/// Σ g·ψ·h² over interior unflagged cells: the discrete pairing ⟨g, ψ⟩.
inline cplx weak_pairing(const GridFunction& g, const std::function<double(cplx)>& psi) {
  cplx s = 0.0;
  for (std::size_t j = 1; j + 1 < g.height; ++j)
    for (std::size_t i = 1; i + 1 < g.width; ++i)
      if (!g.is_flagged(i, j)) s += g.at(i, j) * psi(g.point(i, j));
  return s * g.h * g.h;
}

// ---------------------------------------------------------------------------
// Partition of unity

/// Cubic smoothstep; S(t) + S(1 − t) = 1.
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

/// Squares Q_{jk} of side l tiling [lo, hi] (plus one ring of squares
/// around it so the bumps sum to 1 up to the edge). The bump of Q is the
/// tensor product of S(1 − |x − c|/l), supported in 2Q.
struct Partition {
  cplx lo;
  double side = 1.0;
  int nx = 0, ny = 0;  // squares including the ring

  cplx centre(int j, int k) const { return lo + cplx(side * (j - 0.5), side * (k - 0.5)); }
  std::size_t count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  double bump(std::size_t idx, cplx z) const {
    const cplx c = centre(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
    return smoothstep(1.0 - std::abs(z.real() - c.real()) / side) * smoothstep(1.0 - std::abs(z.imag() - c.imag()) / side);
  }
  double sum(cplx z) const {
    double s = 0.0;
    for (std::size_t q = 0; q < count(); ++q) s += bump(q, z);
    return s;
  }
};

inline Partition make_partition(cplx lo, cplx hi, double side) {
  if (!(side > 0.0)) throw InputError("partition: square side must be positive");
  if (!(hi.real() > lo.real() && hi.imag() > lo.imag())) throw InputError("partition: empty bounding box");
  Partition p;
  p.lo = lo;
  p.side = side;
  p.nx = static_cast<int>(std::ceil((hi.real() - lo.real()) / side - 1e-12)) + 2;
  p.ny = static_cast<int>(std::ceil((hi.imag() - lo.imag()) / side - 1e-12)) + 2;
  return p;
}

/// The bumps of the partition sampled on a grid shaped like `like`.
inline std::vector<GridFunction> partition_of_unity(const Partition& p, const GridFunction& like) {
  std::vector<GridFunction> out;
  out.reserve(p.count());
  for (std::size_t q = 0; q < p.count(); ++q)
    out.push_back(sample(like.origin, like.h, like.width, like.height, [&](cplx z) { return cplx(p.bump(q, z), 0.0); }));
  return out;
}

// ---------------------------------------------------------------------------
// Vitushkin localization

struct Localized {
  GridFunction primary;    // φf + (1/π) C(f ∂̄φ)
  GridFunction alternate;  // −(1/π) C(φ ∂̄f)
  double max_difference = 0.0;  // over interior cells
};

inline Localized vitushkin_localize(const GridFunction& f, const GridFunction& phi) {
  require_compatible(f, phi, "vitushkin_localize");
  f.check();
  phi.check();
  Localized r;
  const GridFunction fd = multiply(f, dbar(phi));
  r.primary = axpy(multiply(phi, f), 1.0 / kPi, cauchy_grid(fd));
  r.primary.flagged.clear();
  r.alternate = cauchy_grid(multiply(phi, dbar(f)));
  for (auto& v : r.alternate.values) v *= -1.0 / kPi;
  r.max_difference = max_abs_interior(axpy(r.primary, -1.0, r.alternate));
  return r;
}

// ---------------------------------------------------------------------------
// Binary grid files: 40-byte little-endian header (f64 origin re, f64 origin
// im, f64 h, u64 width, u64 height) then row-major f64 (re, im) pairs, plus
// a JSON sidecar <path>.json describing the layout.

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  os.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bits;
  if (!is.read(reinterpret_cast<char*>(bits.data()), sizeof(T))) throw InputError("grid file: truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace detail

inline void write_grid(const std::string& path, const GridFunction& g) {
  g.check();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  detail::put_le(os, g.origin.real());
  detail::put_le(os, g.origin.imag());
  detail::put_le(os, g.h);
  detail::put_le(os, static_cast<std::uint64_t>(g.width));
  detail::put_le(os, static_cast<std::uint64_t>(g.height));
  for (auto v : g.values) {
    detail::put_le(os, v.real());
    detail::put_le(os, v.imag());
  }
  if (!os) throw Error("write failed: " + path);
  nlohmann::ordered_json side = {{"format", "caplab-grid"},
                                 {"version", 1},
                                 {"header_bytes", 40},
                                 {"origin", {g.origin.real(), g.origin.imag()}},
                                 {"h", g.h},
                                 {"width", g.width},
                                 {"height", g.height},
                                 {"layout", "row-major, y outer; little-endian f64 (re, im) pairs"}};
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
  if (!js) throw Error("write failed: " + path + ".json");
}

inline GridFunction read_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open grid file " + path);
  GridFunction g;
  const double re = detail::get_le<double>(is), im = detail::get_le<double>(is);
  g.origin = {re, im};
  g.h = detail::get_le<double>(is);
  const auto w = detail::get_le<std::uint64_t>(is), ht = detail::get_le<std::uint64_t>(is);
  if (w < 2 || ht < 2 || w > (1u << 16) || ht > (1u << 16)) throw InputError("grid file: implausible dimensions");
  g.width = static_cast<std::size_t>(w);
  g.height = static_cast<std::size_t>(ht);
  g.values.resize(g.width * g.height);
  for (auto& v : g.values) {
    const double a = detail::get_le<double>(is), b = detail::get_le<double>(is);
    v = {a, b};
  }
  if (is.peek() != std::char_traits<char>::eof()) throw InputError("grid file: trailing bytes");
  g.check();
  return g;
}

}  // namespace caplab::transforms

#endif  // CAPLAB_TRANSFORMS_HPP
