#pragma once

// Measured quantities: energy density mu, discrepancy density xi, the
// density ratio D(t), the aggregate forcing f and its weighted L2 norm, the
// gradient defect w = |grad r|^2 - 1, curvature/normal/velocity fields, and
// interface extraction (radius / front positions).

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"
#include "solver.hpp"

namespace pfmc {

struct DiagnosticsRecord {
  double t = 0.0;
  double mu_total = 0.0;
  double xi_max = 0.0;
  double xi_l1 = 0.0;
  double D_t = 0.0;
  double dissipation = 0.0;
  double f_l2 = 0.0;
  double w_max = 0.0;
  double interface_radius = std::numeric_limits<double>::quiet_NaN();
  double phi_margin = 0.0;
};

inline const char* kDiagHeader =
    "t,mu_total,xi_max,xi_l1,D_t,dissipation,f_l2,w_max,interface_radius,phi_margin";

// ------------------------------------------------------------ densities

// mu density = (1/sigma)(eps |grad phi|^2 / 2 + W(phi)/eps), centered gradient.
template <int D>
ScalarField<D> mu_density(const SimState<D>& st) {
  const VectorField<D> gr = gradient(st.phi, st.workers);
  ScalarField<D> out(st.grid);
  const double isig = 1.0 / st.pot.sigma;
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    double g2 = 0.0;
    for (int a = 0; a < D; ++a) g2 += sq(gr.comp[a].v[i]);
    out.v[i] = isig * (0.5 * st.eps * g2 + st.pot.W(st.phi.v[i]) / st.eps);
  }
  return out;
}

// xi density = (1/sigma)(eps |grad phi|^2 / 2 - W(phi)/eps).
template <int D>
ScalarField<D> xi_density(const SimState<D>& st) {
  const VectorField<D> gr = gradient(st.phi, st.workers);
  ScalarField<D> out(st.grid);
  const double isig = 1.0 / st.pot.sigma;
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    double g2 = 0.0;
    for (int a = 0; a < D; ++a) g2 += sq(gr.comp[a].v[i]);
    out.v[i] = isig * (0.5 * st.eps * g2 - st.pot.W(st.phi.v[i]) / st.eps);
  }
  return out;
}

// Integral of eps (Lap phi - W'(phi)/eps^2)^2 over the torus.
template <int D>
double dissipation_total(const SimState<D>& st) {
  const ScalarField<D> lap = laplacian(st.phi, st.workers);
  double acc = 0.0;
  const double ieps2 = 1.0 / (st.eps * st.eps);
  for (std::size_t i = 0; i < lap.v.size(); ++i)
    acc += sq(lap.v[i] - st.pot.dW(st.phi.v[i]) * ieps2);
  return acc * st.eps * st.grid.cell_volume();
}

// Aggregate forcing f = -u . grad r - g - L r_delta(phi). The transport part
// uses the raw inverse-profile coordinate r = q_inv(phi) (whose gradient is
// the structurally bounded quantity, |grad r| <= 1); the L part uses the
// clamped r_delta, matching the term in the equation itself. The gradient of
// the quintic bridge of r_delta is a measurement artifact of order 1/delta
// wherever a node lands in the bridge window, so it must not enter w or the
// transport term.
template <int D>
ScalarField<D> r_raw_field(const SimState<D>& st) {
  ScalarField<D> out(st.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = st.prof.q_inv(st.phi.v[i]);
  return out;
}

template <int D>
ScalarField<D> f_field(const SimState<D>& st) {
  ScalarField<D> out(st.grid);
  const bool has_u = st.forcing.has_u;
  const bool has_g = st.forcing.has_g;
  const bool has_L = st.forcing.L != 0.0;
  if (has_u) {
    const ScalarField<D> r = r_raw_field(st);
    const VectorField<D> gr = gradient(r, st.workers);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
      double adv = 0.0;
      for (int a = 0; a < D; ++a) adv += st.forcing.u.comp[a].v[i] * gr.comp[a].v[i];
      out.v[i] = -adv;
    }
  }
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    double v = out.v[i];
    if (has_g) v -= st.forcing.g.v[i];
    if (has_L) v -= st.forcing.L * clamped_r(st.prof, st.phi.v[i], st.delta_clamp);
    out.v[i] = v;
  }
  return out;
}

// f_l2 = 2 h^d sum f^2 W(phi)/eps.
template <int D>
double f_l2_total(const SimState<D>& st, const ScalarField<D>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    acc += sq(f.v[i]) * st.pot.W(st.phi.v[i]);
  return 2.0 * acc * st.grid.cell_volume() / st.eps;
}

// w = |grad r|^2 - 1 with r = q_inv(phi) (raw, saturating at the clamp);
// w_max is the (signed) maximum — plateaus contribute -1, the transition band
// contributes ~0 from above only if the gradient bound fails.
template <int D>
ScalarField<D> w_field(const SimState<D>& st) {
  const ScalarField<D> r = r_raw_field(st);
  const VectorField<D> gr = gradient(r, st.workers);
  ScalarField<D> out(st.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    double g2 = 0.0;
    for (int a = 0; a < D; ++a) g2 += sq(gr.comp[a].v[i]);
    out.v[i] = g2 - 1.0;
  }
  return out;
}

template <int D>
double field_max(const ScalarField<D>& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : f.v) m = std::max(m, x);
  return m;
}

template <int D>
double field_l1(const ScalarField<D>& f) {
  double acc = 0.0;
  for (double x : f.v) acc += std::abs(x);
  return acc * f.grid.cell_volume();
}

// ---------------------------------------------------- curvature / velocity

template <int D>
struct CurvatureVelocity {
  VectorField<D> h;   // approximate mean curvature vector
  VectorField<D> nu;  // unit normal (grad phi / |grad phi|)
  VectorField<D> v;   // normal velocity vector
};

// Below |grad phi| = theta_grad = 1e-6/eps all three vectors are zero.
template <int D>
CurvatureVelocity<D> curvature_velocity(const SimState<D>& st) {
  const double theta = 1e-6 / st.eps;
  const VectorField<D> gr = gradient(st.phi, st.workers);
  const ScalarField<D> lap = laplacian(st.phi, st.workers);
  const ScalarField<D> phit = rhs(st);
  CurvatureVelocity<D> out{VectorField<D>(st.grid), VectorField<D>(st.grid),
                           VectorField<D>(st.grid)};
  const double ieps2 = 1.0 / (st.eps * st.eps);
  for (std::size_t i = 0; i < lap.v.size(); ++i) {
    double g2 = 0.0;
    for (int a = 0; a < D; ++a) g2 += sq(gr.comp[a].v[i]);
    const double gn = std::sqrt(g2);
    if (gn <= theta) continue;
    const double hmag = (-lap.v[i] + st.pot.dW(st.phi.v[i]) * ieps2) / gn;
    const double vmag = -phit.v[i] / gn;
    for (int a = 0; a < D; ++a) {
      const double nua = gr.comp[a].v[i] / gn;
      out.nu.comp[a].v[i] = nua;
      out.h.comp[a].v[i] = hmag * nua;
      out.v.comp[a].v[i] = vmag * nua;
    }
  }
  return out;
}

// ------------------------------------------------------------- interfaces

template <int D>
struct InterfaceProbe {
  enum class Kind { none, sphere, strip } kind = Kind::none;
  Point<D> center{};
  int axis = 0;  // strip only
};

namespace detail {

// Walk outward from the node nearest `center` along +-axis and return the
// linearly interpolated distance from `center` to the first sign change of
// phi (positive-to-nonpositive), or nothing if the ray never crosses.
template <int D>
std::optional<double> ray_crossing(const ScalarField<D>& phi,
                                   const std::type_identity_t<Point<D>>& center, int axis,
                                   int dir) {
  const TorusGrid<D>& g = phi.grid;
  const int n = g.n;
  std::array<int, D> base;
  for (int a = 0; a < D; ++a) base[a] = g.wrap(static_cast<int>(std::lround(center[a] / g.h)));
  auto value = [&](int off) {
    std::array<int, D> ix = base;
    ix[axis] = g.wrap(ix[axis] + dir * off);
    if constexpr (D == 2) return phi.at(ix[0], ix[1]);
    else return phi.at(ix[0], ix[1], ix[2]);
  };
  // offset of the base node from the requested center along the ray
  const double base_off =
      dir * TorusGrid<D>::min_image(base[axis] * g.h - center[axis]);
  double prev = value(0);
  if (prev <= 0.0) return std::nullopt;  // center not inside the phase
  for (int off = 1; off <= n / 2; ++off) {
    const double cur = value(off);
    if (prev > 0.0 && cur <= 0.0) {
      const double frac = prev / (prev - cur);
      return base_off + (off - 1 + frac) * g.h;
    }
    prev = cur;
  }
  return std::nullopt;
}

}  // namespace detail

// Average interpolated zero-crossing distance from the probe center over all
// 2*D axis rays (sphere) or the 2 rays of the strip axis (half-width).
// Returns nothing when no ray crosses ("extinct").
template <int D>
std::optional<double> interface_radius(const ScalarField<D>& phi, const InterfaceProbe<D>& pr) {
  if (pr.kind == InterfaceProbe<D>::Kind::none) return std::nullopt;
  double acc = 0.0;
  int cnt = 0;
  const bool strip = pr.kind == InterfaceProbe<D>::Kind::strip;
  for (int a = 0; a < D; ++a) {
    if (strip && a != pr.axis) continue;
    for (int dir : {+1, -1}) {
      if (auto c = detail::ray_crossing(phi, pr.center, a, dir)) {
        acc += *c;
        ++cnt;
      }
    }
  }
  if (cnt == 0) return std::nullopt;
  return acc / cnt;
}

// All interpolated zero crossings of phi along the grid line through `base`
// (node indices) in direction `axis`; coordinates in [0, 1).
template <int D>
std::vector<double> line_zero_crossings(const ScalarField<D>& phi,
                                        const std::type_identity_t<std::array<int, D>>& base,
                                        int axis) {
  const TorusGrid<D>& g = phi.grid;
  const int n = g.n;
  std::vector<double> out;
  auto value = [&](int j) {
    std::array<int, D> ix = base;
    ix[axis] = g.wrap(j);
    if constexpr (D == 2) return phi.at(ix[0], ix[1]);
    else return phi.at(ix[0], ix[1], ix[2]);
  };
  for (int j = 0; j < n; ++j) {
    const double a = value(j), b = value(j + 1);
    if ((a > 0.0 && b <= 0.0) || (a <= 0.0 && b > 0.0)) {
      const double frac = a / (a - b);
      double x = (j + frac) * g.h;
      if (x >= 1.0) x -= 1.0;
      out.push_back(x);
    }
  }
  return out;
}

// ------------------------------------------------------------ density ratio

// D(t) = max{1, mu(Omega), sup mu(B_r(x)) / (omega_{d-1} r^{d-1})}, the sup
// sampled over a lattice of centers and dyadic radii 2^-k, k = 2..log2(n/2).
// omega_{d-1} is the volume of the unit ball in dimension d-1: 2 for d = 2,
// pi for d = 3.
template <int D>
double density_ratio(const ScalarField<D>& mu, double mu_total, int centers_per_axis = 16) {
  if (centers_per_axis < 1) throw std::invalid_argument("density_ratio: empty center lattice");
  const int n = mu.grid.n;
  std::vector<double> radii;
  for (int k = 2; (1 << k) <= n / 2; ++k) radii.push_back(std::ldexp(1.0, -k));
  if (radii.empty()) throw std::invalid_argument("density_ratio: no admissible radii");
  const double omega = D == 2 ? 2.0 : 3.141592653589793238462643383279502884;
  double best = std::max(1.0, mu_total);
  Point<D> c{};
  const double step = 1.0 / centers_per_axis;
  if constexpr (D == 2) {
    for (int i = 0; i < centers_per_axis; ++i)
      for (int j = 0; j < centers_per_axis; ++j) {
        c = {i * step, j * step};
        for (double r : radii)
          best = std::max(best, ball_sum(mu, c, r) / (omega * std::pow(r, D - 1)));
      }
  } else {
    for (int i = 0; i < centers_per_axis; ++i)
      for (int j = 0; j < centers_per_axis; ++j)
        for (int k = 0; k < centers_per_axis; ++k) {
          c = {i * step, j * step, k * step};
          for (double r : radii)
            best = std::max(best, ball_sum(mu, c, r) / (omega * std::pow(r, D - 1)));
        }
  }
  return best;
}

// ------------------------------------------------------------ full record

template <int D>
DiagnosticsRecord compute_record(const SimState<D>& st, const InterfaceProbe<D>& probe,
                                 int centers_per_axis = 16) {
  DiagnosticsRecord rec;
  rec.t = st.t;
  const ScalarField<D> mu = mu_density(st);
  rec.mu_total = integrate_field(mu, st.workers);
  const ScalarField<D> xi = xi_density(st);
  rec.xi_max = field_max<D>(xi);
  rec.xi_l1 = field_l1<D>(xi);
  rec.D_t = density_ratio<D>(mu, rec.mu_total, centers_per_axis);
  rec.dissipation = dissipation_total(st);
  if (st.forcing.has_u || st.forcing.has_g || st.forcing.L != 0.0) {
    const ScalarField<D> f = f_field(st);
    rec.f_l2 = f_l2_total(st, f);
  }
  rec.w_max = field_max<D>(w_field(st));
  if (auto r = interface_radius(st.phi, probe)) rec.interface_radius = *r;
  rec.phi_margin = st.phi_margin;
  return rec;
}

}  // namespace pfmc
