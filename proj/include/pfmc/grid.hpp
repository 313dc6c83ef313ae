#pragma once

// Uniform periodic grid on the flat torus [0,1)^D with D in {2,3}, scalar and
// vector fields over it, finite-difference operators (centered gradient,
// 2D+1-point Laplacian, one-sided pairs for summation-by-parts identities),
// the spectral Helmholtz solve used by the semi-implicit scheme, periodic
// convolution, and ball sums. Nodes sit at x_j = j * h with h = 1/n; storage
// is row-major with the last axis contiguous.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "fft.hpp"
#include "parallel.hpp"

namespace pfmc {

template <int D>
using Point = std::array<double, D>;

template <int D>
struct TorusGrid {
  static_assert(D == 2 || D == 3, "only dimensions 2 and 3 are supported");
  int n = 0;
  double h = 0.0;

  TorusGrid() = default;
  explicit TorusGrid(int n_) : n(n_), h(1.0 / n_) {
    if (n_ < 8) throw std::invalid_argument("TorusGrid: n must be >= 8");
  }

  std::int64_t cells() const {
    std::int64_t c = 1;
    for (int a = 0; a < D; ++a) c *= n;
    return c;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < D; ++a) v *= h;
    return v;
  }
  int wrap(int i) const {
    i %= n;
    return i < 0 ? i + n : i;
  }
  // periodic displacement mapped to [-1/2, 1/2)
  static double min_image(double d) { return d - std::floor(d + 0.5); }
  double min_image_dist(const Point<D>& a, const Point<D>& b) const {
    double s = 0.0;
    for (int ax = 0; ax < D; ++ax) {
      const double d = min_image(a[ax] - b[ax]);
      s += d * d;
    }
    return std::sqrt(s);
  }
};

template <int D>
struct ScalarField {
  TorusGrid<D> grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid<D>& g, double fill = 0.0)
      : grid(g), v(static_cast<std::size_t>(g.cells()), fill) {}

  std::int64_t idx(int i, int j) const {
    static_assert(D == 2 || D == 3);
    return static_cast<std::int64_t>(i) * grid.n + j;
  }
  std::int64_t idx(int i, int j, int k) const {
    return (static_cast<std::int64_t>(i) * grid.n + j) * grid.n + k;
  }
  double& at(int i, int j) { return v[idx(i, j)]; }
  double at(int i, int j) const { return v[idx(i, j)]; }
  double& at(int i, int j, int k) { return v[idx(i, j, k)]; }
  double at(int i, int j, int k) const { return v[idx(i, j, k)]; }
};

template <int D>
struct VectorField {
  std::array<ScalarField<D>, D> comp;

  VectorField() = default;
  explicit VectorField(const TorusGrid<D>& g) {
    for (int a = 0; a < D; ++a) comp[a] = ScalarField<D>(g);
  }
  const TorusGrid<D>& grid() const { return comp[0].grid; }
};

namespace detail {

inline constexpr double kPiGrid = 3.141592653589793238462643383279502884;

inline std::vector<int> plus1(int n) {
  std::vector<int> t(n);
  for (int i = 0; i < n; ++i) t[i] = (i + 1 == n) ? 0 : i + 1;
  return t;
}
inline std::vector<int> minus1(int n) {
  std::vector<int> t(n);
  for (int i = 0; i < n; ++i) t[i] = (i == 0) ? n - 1 : i - 1;
  return t;
}

}  // namespace detail

// Sample a function of the node coordinate into a field.
template <int D>
ScalarField<D> make_field(const TorusGrid<D>& g,
                          const std::function<double(const Point<D>&)>& f) {
  ScalarField<D> out(g);
  const int n = g.n;
  if constexpr (D == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(i, j) = f(Point<2>{i * g.h, j * g.h});
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.at(i, j, k) = f(Point<3>{i * g.h, j * g.h, k * g.h});
  }
  return out;
}

// h^D * sum of all node values (slab-deterministic).
template <int D>
double integrate_field(const ScalarField<D>& f, int workers = 1) {
  const double s = parallel_sum(static_cast<std::int64_t>(f.v.size()), workers,
                                [&f](std::int64_t b, std::int64_t e) {
                                  double acc = 0.0;
                                  for (std::int64_t i = b; i < e; ++i) acc += f.v[i];
                                  return acc;
                                });
  return s * f.grid.cell_volume();
}

template <int D>
double max_abs(const ScalarField<D>& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

// 2*D+1 point Laplacian, (sum of neighbors - 2D * center) / h^2.
template <int D>
ScalarField<D> laplacian(const ScalarField<D>& f, int workers = 1) {
  const int n = f.grid.n;
  const double ih2 = 1.0 / (f.grid.h * f.grid.h);
  ScalarField<D> out(f.grid);
  const auto ip = detail::plus1(n), im = detail::minus1(n);
  if constexpr (D == 2) {
    parallel_for(n, workers, [&](std::int64_t b, std::int64_t e) {
      for (int i = static_cast<int>(b); i < e; ++i)
        for (int j = 0; j < n; ++j)
          out.at(i, j) = ih2 * (f.at(ip[i], j) + f.at(im[i], j) + f.at(i, ip[j]) +
                                f.at(i, im[j]) - 4.0 * f.at(i, j));
    });
  } else {
    parallel_for(n, workers, [&](std::int64_t b, std::int64_t e) {
      for (int i = static_cast<int>(b); i < e; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            out.at(i, j, k) =
                ih2 * (f.at(ip[i], j, k) + f.at(im[i], j, k) + f.at(i, ip[j], k) +
                       f.at(i, im[j], k) + f.at(i, j, ip[k]) + f.at(i, j, im[k]) -
                       6.0 * f.at(i, j, k));
    });
  }
  return out;
}

// Centered gradient, component a: (f[i+e_a] - f[i-e_a]) / (2h).
template <int D>
VectorField<D> gradient(const ScalarField<D>& f, int workers = 1) {
  const int n = f.grid.n;
  const double i2h = 1.0 / (2.0 * f.grid.h);
  VectorField<D> out(f.grid);
  const auto ip = detail::plus1(n), im = detail::minus1(n);
  if constexpr (D == 2) {
    parallel_for(n, workers, [&](std::int64_t b, std::int64_t e) {
      for (int i = static_cast<int>(b); i < e; ++i)
        for (int j = 0; j < n; ++j) {
          out.comp[0].at(i, j) = i2h * (f.at(ip[i], j) - f.at(im[i], j));
          out.comp[1].at(i, j) = i2h * (f.at(i, ip[j]) - f.at(i, im[j]));
        }
    });
  } else {
    parallel_for(n, workers, [&](std::int64_t b, std::int64_t e) {
      for (int i = static_cast<int>(b); i < e; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            out.comp[0].at(i, j, k) = i2h * (f.at(ip[i], j, k) - f.at(im[i], j, k));
            out.comp[1].at(i, j, k) = i2h * (f.at(i, ip[j], k) - f.at(i, im[j], k));
            out.comp[2].at(i, j, k) = i2h * (f.at(i, j, ip[k]) - f.at(i, j, im[k]));
          }
    });
  }
  return out;
}

// Forward difference gradient and backward difference divergence: the pair
// satisfies exact summation by parts on the torus, and bwd_div(fwd_grad f)
// reproduces the Laplacian stencil identically.
template <int D>
VectorField<D> fwd_grad(const ScalarField<D>& f) {
  const int n = f.grid.n;
  const double ih = 1.0 / f.grid.h;
  VectorField<D> out(f.grid);
  const auto ip = detail::plus1(n);
  if constexpr (D == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.comp[0].at(i, j) = ih * (f.at(ip[i], j) - f.at(i, j));
        out.comp[1].at(i, j) = ih * (f.at(i, ip[j]) - f.at(i, j));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          out.comp[0].at(i, j, k) = ih * (f.at(ip[i], j, k) - f.at(i, j, k));
          out.comp[1].at(i, j, k) = ih * (f.at(i, ip[j], k) - f.at(i, j, k));
          out.comp[2].at(i, j, k) = ih * (f.at(i, j, ip[k]) - f.at(i, j, k));
        }
  }
  return out;
}

template <int D>
ScalarField<D> bwd_div(const VectorField<D>& u) {
  const TorusGrid<D>& g = u.grid();
  const int n = g.n;
  const double ih = 1.0 / g.h;
  ScalarField<D> out(g);
  const auto im = detail::minus1(n);
  if constexpr (D == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.at(i, j) = ih * (u.comp[0].at(i, j) - u.comp[0].at(im[i], j) +
                             u.comp[1].at(i, j) - u.comp[1].at(i, im[j]));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.at(i, j, k) = ih * (u.comp[0].at(i, j, k) - u.comp[0].at(im[i], j, k) +
                                  u.comp[1].at(i, j, k) - u.comp[1].at(i, im[j], k) +
                                  u.comp[2].at(i, j, k) - u.comp[2].at(i, j, im[k]));
  }
  return out;
}

namespace detail {

// FFT along one axis of a D-dimensional complex array (in place).
template <int D>
void axis_fft(std::vector<fft::cd>& a, int n, int axis, bool inverse, int workers) {
  const fft::Plan& pl = fft::plan_for(n);
  std::int64_t lines = 1;
  for (int ax = 0; ax < D; ++ax)
    if (ax != axis) lines *= n;
  // stride between consecutive elements along `axis`, and the mapping from a
  // line index to its base offset, follow from row-major layout.
  std::int64_t stride = 1;
  for (int ax = axis + 1; ax < D; ++ax) stride *= n;
  parallel_for(lines, workers, [&](std::int64_t lb, std::int64_t le) {
    std::vector<fft::cd> line(n);
    std::vector<fft::cd> scratch(pl.scratch_size());
    fft::cd* sc = scratch.empty() ? nullptr : scratch.data();
    for (std::int64_t l = lb; l < le; ++l) {
      // decompose the line index over the non-transform axes
      std::int64_t base = 0, rem = l;
      for (int ax = D - 1; ax >= 0; --ax) {
        if (ax == axis) continue;
        std::int64_t ax_stride = 1;
        for (int bx = ax + 1; bx < D; ++bx) ax_stride *= n;
        const std::int64_t coord = rem % n;
        rem /= n;
        base += coord * ax_stride;
      }
      if (stride == 1) {
        pl.run(a.data() + base, inverse, sc);
      } else {
        for (int t = 0; t < n; ++t) line[t] = a[base + t * stride];
        pl.run(line.data(), inverse, sc);
        for (int t = 0; t < n; ++t) a[base + t * stride] = line[t];
      }
    }
  });
}

}  // namespace detail

// Reusable complex buffers for spectral solves.
struct SpectralWorkspace {
  std::vector<fft::cd> buf;
  std::vector<fft::cd> buf2;
};

namespace detail {

// Real-input 2-D Helmholtz solve exploiting conjugate symmetry: row pairs are
// packed into single complex transforms along the contiguous axis and only
// spectral rows k <= n/2 are kept (the rest are conjugate mirrors, and the
// real symmetric symbol preserves that relation). Column transforms run on a
// transposed copy so every FFT is unit-stride. Halves the transform count of
// the generic complex path.
inline void helmholtz_2d_real(double* v, int n, double h, double a, int workers,
                              SpectralWorkspace& w) {
  const fft::Plan& pl = fft::plan_for(n);
  const int K = n / 2 + 1;  // retained spectral rows along the packed axis
  const std::int64_t NK = static_cast<std::int64_t>(n) * K;
  w.buf.resize(static_cast<std::size_t>(NK));   // H[i][k], row-major n x K
  w.buf2.resize(static_cast<std::size_t>(NK));  // Ht[k][i], row-major K x n
  fft::cd* H = w.buf.data();
  fft::cd* Ht = w.buf2.data();

  // Forward along axis 1: two real rows per complex transform, then split.
  parallel_for(n / 2, workers, [&](std::int64_t mb, std::int64_t me) {
    std::vector<fft::cd> z(n);
    std::vector<fft::cd> scratch(pl.scratch_size());
    fft::cd* sc = scratch.empty() ? nullptr : scratch.data();
    for (std::int64_t m = mb; m < me; ++m) {
      const double* r0 = v + 2 * m * n;
      const double* r1 = r0 + n;
      for (int j = 0; j < n; ++j) z[j] = fft::cd(r0[j], r1[j]);
      pl.run(z.data(), false, sc);
      fft::cd* h0 = H + 2 * m * K;
      fft::cd* h1 = h0 + K;
      for (int k = 0; k < K; ++k) {
        const fft::cd zk = z[k];
        const fft::cd zc = std::conj(z[(n - k) % n]);
        h0[k] = 0.5 * (zk + zc);
        h1[k] = fft::cd(0.0, -0.5) * (zk - zc);
      }
    }
  });

  // Blocked transpose H (n x K) -> Ht (K x n).
  constexpr int B = 64;
  for (int i0 = 0; i0 < n; i0 += B)
    for (int k0 = 0; k0 < K; k0 += B) {
      const int i1 = std::min(i0 + B, n), k1 = std::min(k0 + B, K);
      for (int i = i0; i < i1; ++i)
        for (int k = k0; k < k1; ++k)
          Ht[static_cast<std::int64_t>(k) * n + i] = H[static_cast<std::int64_t>(i) * K + k];
    }

  // Forward along axis 0, symbol multiply, inverse along axis 0 — all on
  // contiguous K rows of length n.
  std::vector<double> lam(n);
  const double ih2 = 1.0 / (h * h);
  for (int k = 0; k < n; ++k)
    lam[k] = 2.0 * ih2 * (1.0 - std::cos(2.0 * kPiGrid * k / n));
  parallel_for(K, workers, [&](std::int64_t kb, std::int64_t ke) {
    std::vector<fft::cd> scratch(pl.scratch_size());
    fft::cd* sc = scratch.empty() ? nullptr : scratch.data();
    for (std::int64_t k = kb; k < ke; ++k) {
      fft::cd* row = Ht + k * n;
      pl.run(row, false, sc);
      for (int i = 0; i < n; ++i) row[i] /= 1.0 + a * (lam[i] + lam[k]);
      pl.run(row, true, sc);
    }
  });

  // Transpose back.
  for (int k0 = 0; k0 < K; k0 += B)
    for (int i0 = 0; i0 < n; i0 += B) {
      const int k1 = std::min(k0 + B, K), i1 = std::min(i0 + B, n);
      for (int k = k0; k < k1; ++k)
        for (int i = i0; i < i1; ++i)
          H[static_cast<std::int64_t>(i) * K + k] = Ht[static_cast<std::int64_t>(k) * n + i];
    }

  // Inverse along axis 1: rebuild the full spectrum of (row0 + i row1) from
  // the two half spectra and their conjugate mirrors, one transform per pair.
  parallel_for(n / 2, workers, [&](std::int64_t mb, std::int64_t me) {
    std::vector<fft::cd> z(n);
    std::vector<fft::cd> scratch(pl.scratch_size());
    fft::cd* sc = scratch.empty() ? nullptr : scratch.data();
    for (std::int64_t m = mb; m < me; ++m) {
      const fft::cd* h0 = H + 2 * m * K;
      const fft::cd* h1 = h0 + K;
      for (int k = 0; k < K; ++k) z[k] = h0[k] + fft::cd(0.0, 1.0) * h1[k];
      for (int k = K; k < n; ++k)
        z[k] = std::conj(h0[n - k]) + fft::cd(0.0, 1.0) * std::conj(h1[n - k]);
      pl.run(z.data(), true, sc);
      double* r0 = v + 2 * m * n;
      double* r1 = r0 + n;
      for (int j = 0; j < n; ++j) {
        r0[j] = z[j].real();
        r1[j] = z[j].imag();
      }
    }
  });
}

}  // namespace detail

// Solve (I - a * Lap_h) v = f in place; a must be positive. The discrete
// symbol of the Laplacian stencil is -sum_ax (2/h^2)(1 - cos(2 pi k/n)).
template <int D>
void helmholtz_inplace(ScalarField<D>& f, double a, int workers = 1,
                       SpectralWorkspace* ws = nullptr) {
  if (!(a > 0.0)) throw std::invalid_argument("helmholtz: a must be positive");
  const int n = f.grid.n;
  const std::int64_t N = f.grid.cells();
  SpectralWorkspace local;
  SpectralWorkspace& w = ws ? *ws : local;
  if constexpr (D == 2) {
    if (n % 2 == 0) {
      detail::helmholtz_2d_real(f.v.data(), n, f.grid.h, a, workers, w);
      return;
    }
  }
  w.buf.resize(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) w.buf[i] = fft::cd(f.v[i], 0.0);
  for (int ax = 0; ax < D; ++ax) detail::axis_fft<D>(w.buf, n, ax, false, workers);
  std::vector<double> lam(n);
  const double ih2 = 1.0 / (f.grid.h * f.grid.h);
  for (int k = 0; k < n; ++k)
    lam[k] = 2.0 * ih2 * (1.0 - std::cos(2.0 * detail::kPiGrid * k / n));
  if constexpr (D == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w.buf[static_cast<std::int64_t>(i) * n + j] /= 1.0 + a * (lam[i] + lam[j]);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          w.buf[(static_cast<std::int64_t>(i) * n + j) * n + k] /=
              1.0 + a * (lam[i] + lam[j] + lam[k]);
  }
  for (int ax = 0; ax < D; ++ax) detail::axis_fft<D>(w.buf, n, ax, true, workers);
  for (std::int64_t i = 0; i < N; ++i) f.v[i] = w.buf[i].real();
}

template <int D>
ScalarField<D> helmholtz_solve(const ScalarField<D>& f, double a, int workers = 1) {
  ScalarField<D> out = f;
  helmholtz_inplace(out, a, workers);
  return out;
}

// Periodic convolution with a nonnegative kernel, normalized so the kernel
// weights sum to one (constants are preserved). Rejects empty kernels.
template <int D>
ScalarField<D> periodic_convolve(const ScalarField<D>& f, const ScalarField<D>& kernel,
                                 int workers = 1) {
  if (kernel.grid.n != f.grid.n)
    throw std::invalid_argument("periodic_convolve: grids must match");
  double ksum = 0.0;
  for (double k : kernel.v) {
    if (k < -1e-15) throw std::invalid_argument("periodic_convolve: kernel must be nonnegative");
    ksum += k;
  }
  if (!(ksum > 0.0)) throw std::invalid_argument("periodic_convolve: kernel sums to zero");
  const int n = f.grid.n;
  const std::int64_t N = f.grid.cells();
  std::vector<fft::cd> fa(static_cast<std::size_t>(N)), ka(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    fa[i] = fft::cd(f.v[i], 0.0);
    ka[i] = fft::cd(kernel.v[i] / ksum, 0.0);
  }
  for (int ax = 0; ax < D; ++ax) {
    detail::axis_fft<D>(fa, n, ax, false, workers);
    detail::axis_fft<D>(ka, n, ax, false, workers);
  }
  for (std::int64_t i = 0; i < N; ++i) fa[i] *= ka[i];
  for (int ax = 0; ax < D; ++ax) detail::axis_fft<D>(fa, n, ax, true, workers);
  ScalarField<D> out(f.grid);
  for (std::int64_t i = 0; i < N; ++i) out.v[i] = fa[i].real();
  return out;
}

// h^D * sum of f over nodes with periodic distance to `center` strictly less
// than `radius`; radius must lie in (0, 1/2].
template <int D>
double ball_sum(const ScalarField<D>& f, const std::type_identity_t<Point<D>>& center,
                double radius) {
  if (!(radius > 0.0) || radius > 0.5)
    throw std::invalid_argument("ball_sum: radius must lie in (0, 1/2]");
  const TorusGrid<D>& g = f.grid;
  const int n = g.n;
  const double r2 = radius * radius;
  // bounding box of lattice indices around the center, then wrap
  std::array<int, D> lo, hi;
  for (int ax = 0; ax < D; ++ax) {
    lo[ax] = static_cast<int>(std::floor((center[ax] - radius) / g.h)) - 1;
    hi[ax] = static_cast<int>(std::ceil((center[ax] + radius) / g.h)) + 1;
    if (hi[ax] - lo[ax] >= n) {
      lo[ax] = 0;
      hi[ax] = n - 1;
    }
  }
  double acc = 0.0;
  if constexpr (D == 2) {
    for (int i = lo[0]; i <= hi[0]; ++i) {
      const double dx = TorusGrid<D>::min_image(i * g.h - center[0]);
      for (int j = lo[1]; j <= hi[1]; ++j) {
        const double dy = TorusGrid<D>::min_image(j * g.h - center[1]);
        if (dx * dx + dy * dy < r2) acc += f.at(g.wrap(i), g.wrap(j));
      }
    }
  } else {
    for (int i = lo[0]; i <= hi[0]; ++i) {
      const double dx = TorusGrid<D>::min_image(i * g.h - center[0]);
      for (int j = lo[1]; j <= hi[1]; ++j) {
        const double dy = TorusGrid<D>::min_image(j * g.h - center[1]);
        for (int k = lo[2]; k <= hi[2]; ++k) {
          const double dz = TorusGrid<D>::min_image(k * g.h - center[2]);
          if (dx * dx + dy * dy + dz * dz < r2) acc += f.at(g.wrap(i), g.wrap(j), g.wrap(k));
        }
      }
    }
  }
  return acc * g.cell_volume();
}

// Translate a field by a whole number of lattice cells (used by equivariance
// tests): out(x) = f(x - shift * h).
template <int D>
ScalarField<D> shift_field(const ScalarField<D>& f,
                           const std::type_identity_t<std::array<int, D>>& shift) {
  const int n = f.grid.n;
  ScalarField<D> out(f.grid);
  if constexpr (D == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.at(i, j) = f.at(f.grid.wrap(i - shift[0]), f.grid.wrap(j - shift[1]));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.at(i, j, k) = f.at(f.grid.wrap(i - shift[0]), f.grid.wrap(j - shift[1]),
                                 f.grid.wrap(k - shift[2]));
  }
  return out;
}

}  // namespace pfmc
