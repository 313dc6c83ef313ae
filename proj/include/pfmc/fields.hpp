#pragma once

// Field construction: the clamped inverse-profile coordinate r_delta, initial
// data from geometric shapes, mollified forcing with its gradient bounds and
// the clamping coefficient L, and epsilon selection under the gradient
// hypothesis L <= eps^(-gamma).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "grid.hpp"
#include "potential.hpp"

namespace pfmc {

// ------------------------------------------------------------ clamped_r

// Three-branch clamped inverse profile r_delta(s):
//   middle   |s| <= 1-delta : (q^eps)^{-1}(s)
//   blend    1-delta < |s| < 1-delta/2 : monotone C^1 quintic bridge
//   outer    |s| >= 1-delta/2 : constant (q^eps)^{-1}(+-(1-delta)) +- 1
// The bridge carries the value from A = q_inv(1-delta) to A + 1 with slope
// matching q_inv at the inner end and zero slope at the outer end:
//   r(t) = A + w_b [ m (t - t^3 + t^4/2) + c (t^3/3 - t^4/2 + t^5/5) ],
// t in [0,1] across the bridge, w_b = delta/2 the bridge width in s,
// m = q_inv'(1-delta), and c = 30 (2/delta - m/2) chosen so r(1) = A + 1.
// c >= 0 for every eps < 8, so the bridge is monotone (integrand
// m(1-S) + c beta >= 0 with S the smoothstep and beta = t^2(1-t)^2 >= 0).
inline double clamped_r(const ProfileSpec& p, double s, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("clamped_r: delta must lie in (0, 1)");
  if (std::abs(s) <= 1.0 - delta) return p.q_inv(s);
  // Work on the positive side; mirror through q_inv for s < 0 so asymmetric
  // wells keep their own branch values.
  const bool neg = s < 0.0;
  const double as = std::abs(s);
  auto qi = [&p, neg](double u) { return neg ? -p.q_inv(-u) : p.q_inv(u); };
  const double A = qi(1.0 - delta);
  if (as >= 1.0 - 0.5 * delta) return neg ? -(A + 1.0) : A + 1.0;
  const double w_b = 0.5 * delta;
  const double t = (as - (1.0 - delta)) / w_b;
  // slope of q_inv at the matching point by a narrow centered difference
  // (q_inv is smooth there); equals eps/(1-(1-delta)^2) for the standard well
  const double ds = delta * 1e-3;
  const double m = (qi(1.0 - delta + ds) - qi(1.0 - delta - ds)) / (2.0 * ds);
  const double c = 30.0 * (2.0 / delta - 0.5 * m);
  const double t3 = t * t * t, t4 = t3 * t, t5 = t4 * t;
  const double val = A + w_b * (m * (t - t3 + 0.5 * t4) +
                                c * (t3 / 3.0 - 0.5 * t4 + 0.2 * t5));
  return neg ? -val : val;
}

// ------------------------------------------------------------ shapes

enum class ShapeKind { sphere, strip, annulus, two_spheres };

template <int D>
struct InitialShape {
  ShapeKind kind = ShapeKind::sphere;
  Point<D> center{};   // sphere / annulus / first of two_spheres
  double radius = 0.0; // sphere / first of two_spheres
  int axis = 0;        // strip: coordinate axis the strip bounds
  double a = 0.0;      // strip lower bound; annulus inner radius
  double b = 0.0;      // strip upper bound; annulus outer radius
  Point<D> center2{};  // second sphere
  double radius2 = 0.0;
};

// Signed distance to the shape boundary, positive inside the phi = +1 region,
// measured with the periodic metric.
template <int D>
double signed_distance(const TorusGrid<D>& g, const InitialShape<D>& sh,
                       const std::type_identity_t<Point<D>>& x) {
  switch (sh.kind) {
    case ShapeKind::sphere:
      return sh.radius - g.min_image_dist(x, sh.center);
    case ShapeKind::strip: {
      const double t = x[sh.axis];
      auto circ = [](double u, double v) { return std::abs(TorusGrid<D>::min_image(u - v)); };
      if (t >= sh.a && t <= sh.b) return std::min(t - sh.a, sh.b - t);
      return -std::min(circ(t, sh.a), circ(t, sh.b));
    }
    case ShapeKind::annulus: {
      const double d = g.min_image_dist(x, sh.center);
      return std::min(d - sh.a, sh.b - d);
    }
    case ShapeKind::two_spheres: {
      const double d1 = sh.radius - g.min_image_dist(x, sh.center);
      const double d2 = sh.radius2 - g.min_image_dist(x, sh.center2);
      return std::max(d1, d2);
    }
  }
  throw std::logic_error("signed_distance: unknown shape kind");
}

// Smallest of the distances that keep the interface away from shape centers,
// self-images across the periodic seams, and sibling interfaces.
template <int D>
double shape_clearance(const TorusGrid<D>& g, const InitialShape<D>& sh) {
  switch (sh.kind) {
    case ShapeKind::sphere:
      if (!(sh.radius > 0.0 && sh.radius < 0.5))
        throw std::invalid_argument("shape: sphere radius must lie in (0, 1/2)");
      return std::min(sh.radius, 0.5 - sh.radius);
    case ShapeKind::strip: {
      if (!(sh.a < sh.b && sh.a > 0.0 && sh.b < 1.0))
        throw std::invalid_argument("shape: strip requires 0 < a < b < 1");
      const double w = sh.b - sh.a;
      return 0.5 * std::min(w, 1.0 - w);
    }
    case ShapeKind::annulus: {
      if (!(sh.a > 0.0 && sh.a < sh.b && sh.b < 0.5))
        throw std::invalid_argument("shape: annulus requires 0 < a < b < 1/2");
      return std::min({0.5 * (sh.b - sh.a), sh.a, 0.5 - sh.b});
    }
    case ShapeKind::two_spheres: {
      if (!(sh.radius > 0.0 && sh.radius2 > 0.0 && sh.radius < 0.5 && sh.radius2 < 0.5))
        throw std::invalid_argument("shape: sphere radii must lie in (0, 1/2)");
      const double gap =
          0.5 * (g.min_image_dist(sh.center, sh.center2) - sh.radius - sh.radius2);
      if (!(gap > 0.0)) throw std::invalid_argument("shape: two spheres overlap");
      return std::min({sh.radius, sh.radius2, 0.5 - sh.radius, 0.5 - sh.radius2, gap});
    }
  }
  throw std::logic_error("shape_clearance: unknown shape kind");
}

struct InitialOptions {
  bool allow_thin_clearance = false;  // demote the clearance >= 4 eps check to a warning
  double ramp_factor = 1.0;           // > 1 steepens phi_0 (negative-control data)
};

// phi_0 = q^eps(ramp * clamp(signed distance, +-R_cut)), R_cut =
// min(clearance, 10 eps). Clamping keeps |phi_0| strictly inside (-1, 1)
// (profile saturation) while |grad r| <= 1 holds wherever unclamped.
template <int D>
ScalarField<D> initial_phi(const TorusGrid<D>& g, const InitialShape<D>& sh,
                           const ProfileSpec& prof, const InitialOptions& opt = {}) {
  const double clearance = shape_clearance(g, sh);
  if (clearance < 4.0 * prof.eps && !opt.allow_thin_clearance)
    throw std::invalid_argument(
        "initial_phi: shape clearance " + std::to_string(clearance) + " is below 4*eps = " +
        std::to_string(4.0 * prof.eps) + " (set allow_thin_clearance to override)");
  if (!(opt.ramp_factor > 0.0))
    throw std::invalid_argument("initial_phi: ramp_factor must be positive");
  const double r_cut = std::min(clearance, 10.0 * prof.eps);
  return make_field<D>(g, [&](const Point<D>& x) {
    const double sd = std::clamp(signed_distance(g, sh, x), -r_cut, r_cut);
    return prof.q(opt.ramp_factor * sd);
  });
}

// ------------------------------------------------------------ forcing

template <int D>
struct ForcingData {
  bool has_u = false;
  bool has_g = false;
  VectorField<D> u;
  ScalarField<D> g;
  double sup_grad_u = 0.0;  // max over nodes of the Jacobian Frobenius norm
  double sup_grad_g = 0.0;
  double L = 0.0;           // 2 sup|grad u| + sup|grad g|, unless pinned
  bool L_pinned = false;
};

template <int D>
ForcingData<D> no_forcing(const TorusGrid<D>&) {
  return ForcingData<D>{};
}

namespace detail {

template <int D>
double sup_grad_scalar(const ScalarField<D>& f, int workers) {
  const VectorField<D> gr = gradient(f, workers);
  double m = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    double s = 0.0;
    for (int a = 0; a < D; ++a) s += sq(gr.comp[a].v[i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

template <int D>
double sup_grad_vector(const VectorField<D>& u, int workers) {
  std::array<VectorField<D>, D> J;
  for (int b = 0; b < D; ++b) J[b] = gradient(u.comp[b], workers);
  double m = 0.0;
  for (std::size_t i = 0; i < u.comp[0].v.size(); ++i) {
    double s = 0.0;
    for (int b = 0; b < D; ++b)
      for (int a = 0; a < D; ++a) s += sq(J[b].comp[a].v[i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

// Bump kernel sampled on the grid: Psi_delta(x) = exp(-1/(1-|x/delta|^2))
// inside |x| < delta, zero outside. periodic_convolve normalizes it.
template <int D>
ScalarField<D> bump_kernel(const TorusGrid<D>& g, double delta) {
  return make_field<D>(g, [&](const Point<D>& x) {
    double r2 = 0.0;
    for (int a = 0; a < D; ++a) r2 += sq(TorusGrid<D>::min_image(x[a]));
    const double z2 = r2 / (delta * delta);
    return z2 < 1.0 ? std::exp(-1.0 / (1.0 - z2)) : 0.0;
  });
}

}  // namespace detail

// Mollify raw forcing fields with the bump kernel at scale delta, measure the
// discrete sup gradients, and assemble L = 2 sup|grad u| + sup|grad g|.
// Either field may be absent (pass nullptr).
template <int D>
ForcingData<D> mollify_forcing(const TorusGrid<D>& g, const VectorField<D>* u_raw,
                               const ScalarField<D>* g_raw, double delta, int workers = 1) {
  if (u_raw == nullptr && g_raw == nullptr) return ForcingData<D>{};
  if (!(delta >= g.h))
    throw std::invalid_argument("mollify_forcing: delta must be >= h for the kernel to resolve");
  const ScalarField<D> ker = detail::bump_kernel<D>(g, delta);
  ForcingData<D> out;
  if (u_raw) {
    out.has_u = true;
    out.u = VectorField<D>(g);
    for (int a = 0; a < D; ++a) out.u.comp[a] = periodic_convolve(u_raw->comp[a], ker, workers);
    out.sup_grad_u = detail::sup_grad_vector(out.u, workers);
  }
  if (g_raw) {
    out.has_g = true;
    out.g = periodic_convolve(*g_raw, ker, workers);
    out.sup_grad_g = detail::sup_grad_scalar(out.g, workers);
  }
  out.L = 2.0 * out.sup_grad_u + out.sup_grad_g;
  return out;
}

// Assemble forcing from already-smooth sampled fields (no mollification);
// used for constant presets where the gradients are zero analytically.
template <int D>
ForcingData<D> direct_forcing(const TorusGrid<D>& g, const VectorField<D>* u,
                              const ScalarField<D>* g_field, int workers = 1) {
  ForcingData<D> out;
  if (u) {
    out.has_u = true;
    out.u = *u;
    out.sup_grad_u = detail::sup_grad_vector(*u, workers);
  }
  if (g_field) {
    out.has_g = true;
    out.g = *g_field;
    out.sup_grad_g = detail::sup_grad_scalar(*g_field, workers);
  }
  (void)g;
  out.L = 2.0 * out.sup_grad_u + out.sup_grad_g;
  return out;
}

// Pin L to a prescribed value (epsilon-sweep experiments force L = eps^-gamma
// to probe the L-term scaling in isolation).
template <int D>
void pin_L(ForcingData<D>& fd, double L) {
  if (!(L >= 0.0)) throw std::invalid_argument("pin_L: L must be nonnegative");
  fd.L = L;
  fd.L_pinned = true;
}

// ------------------------------------------------------------ select_epsilon

struct EpsilonSelection {
  double eps = 0.0;
  std::string rejection;  // set when no candidate is admissible
};

// Largest candidate eps with sup|grad u| <= eps^-gamma, sup|grad g| <=
// eps^-gamma and L <= eps^-gamma. Candidates must be positive and descending.
template <int D>
EpsilonSelection select_epsilon(const ForcingData<D>& fd, double gamma,
                                const std::vector<double>& candidates) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("select_epsilon: gamma must lie in (0, 1/2)");
  if (candidates.empty()) throw std::invalid_argument("select_epsilon: no candidates");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!(candidates[i] > 0.0))
      throw std::invalid_argument("select_epsilon: candidates must be positive");
    if (i > 0 && !(candidates[i] < candidates[i - 1]))
      throw std::invalid_argument("select_epsilon: candidates must be strictly descending");
  }
  std::string last;
  for (double eps : candidates) {
    const double bound = std::pow(eps, -gamma);
    if (fd.sup_grad_u > bound)
      last = "sup_grad_u = " + std::to_string(fd.sup_grad_u) + " > " + std::to_string(bound) +
             " at eps = " + std::to_string(eps);
    else if (fd.sup_grad_g > bound)
      last = "sup_grad_g = " + std::to_string(fd.sup_grad_g) + " > " + std::to_string(bound) +
             " at eps = " + std::to_string(eps);
    else if (fd.L > bound)
      last = "L = " + std::to_string(fd.L) + " > " + std::to_string(bound) +
             " at eps = " + std::to_string(eps);
    else
      return {eps, ""};
  }
  return {0.0, last.empty() ? "no admissible candidate" : last};
}

}  // namespace pfmc
