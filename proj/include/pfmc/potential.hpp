#pragma once

// Double-well potential W, the one-dimensional transition profile q^eps and
// its inverse, and the surface-tension normalization sigma = integral of
// sqrt(2 W) over [-1, 1].
//
// The standard quartic well W(s) = (1 - s^2)^2 / 2 has the closed-form
// profile q^eps(r) = tanh(r / eps). Custom wells get a tabulated profile
// built from the defining quadrature r(s) = eps * int_0^s ds' / sqrt(2 W).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace pfmc {

// Inverse-profile evaluations clamp their argument to |s| <= 1 - kQinvClamp
// so the returned radial coordinate stays finite (about 14.16 * eps at the
// clamp for the standard well).
inline constexpr double kQinvClamp = 1e-12;

// Frozen bound for the standard quartic well:
//   sup_{|s|<1} (artanh s)^2 W(s) = 0.1002369886749622...   (at s ~ 0.648)
inline constexpr double kCwStandard = 0.10023698868;

enum class PotentialKind { standard_quartic, custom };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::custom;
  std::function<double(double)> W;
  std::function<double(double)> dW;
  std::function<double(double)> ddW;
  double alpha1 = 0.0;  // dW < 0 on (alpha1, 1) and dW > 0 on (-1, alpha1)
  double alpha2 = 0.7;  // ddW > 0 for alpha2 <= |s| <= 1
  double c_w = 0.0;     // bound for (q1^{-1}(s))^2 W(s) on (-1, 1)
  double sigma = 0.0;   // int_{-1}^{1} sqrt(2 W)
};

inline PotentialSpec make_standard_potential() {
  PotentialSpec p;
  p.kind = PotentialKind::standard_quartic;
  p.W = [](double s) { return 0.5 * sq(1.0 - s * s); };
  p.dW = [](double s) { return -2.0 * s * (1.0 - s * s); };
  p.ddW = [](double s) { return 6.0 * s * s - 2.0; };
  p.alpha1 = 0.0;
  p.alpha2 = 0.7;
  p.c_w = kCwStandard;
  p.sigma = 4.0 / 3.0;
  return p;
}

// sigma = int_{-1}^{1} sqrt(2 W(s)) ds by adaptive quadrature. A negative W
// sample makes the integrand NaN and is rejected by the quadrature.
inline double compute_sigma(const PotentialSpec& p, double tol = 1e-12) {
  if (!p.W) throw std::invalid_argument("compute_sigma: potential has no W callable");
  return quad::adaptive([&p](double s) { return std::sqrt(2.0 * p.W(s)); }, -1.0, 1.0, tol);
}

namespace detail {

// Tabulated eps = 1 profile for a custom well, parametrized by y = artanh(s):
// r(y) = int_0^{s(y)} ds' / sqrt(2 W(s')), with dr/dy = (1 - s^2)/sqrt(2 W)
// smooth up to the clamp for quadratically non-degenerate wells. Monotone
// cubic Hermite interpolation in y gives both r(s) and its inverse s(r).
struct ProfileTable {
  std::vector<double> y, r, drdy;
  double y_max = 0.0, r_max = 0.0;

  static std::shared_ptr<ProfileTable> build(const PotentialSpec& p, int half_nodes = 4096) {
    auto tab = std::make_shared<ProfileTable>();
    const double y_max = std::atanh(1.0 - kQinvClamp);
    const int m = 2 * half_nodes + 1;
    tab->y.resize(m);
    tab->r.resize(m);
    tab->drdy.resize(m);
    auto slope = [&p](double y) {
      const double s = std::tanh(y);
      const double w = p.W(s);
      if (!(w > 0.0))
        throw std::invalid_argument("profile: W must be positive strictly inside (-1, 1)");
      return (1.0 - s * s) / std::sqrt(2.0 * w);
    };
    const int c = half_nodes;  // index of y = 0
    tab->y[c] = 0.0;
    tab->r[c] = 0.0;
    tab->drdy[c] = slope(0.0);
    for (int j = 1; j <= half_nodes; ++j) {
      const double ya = y_max * (j - 1) / half_nodes;
      const double yb = y_max * j / half_nodes;
      const double dr = quad::adaptive(slope, ya, yb, 1e-14);
      tab->y[c + j] = yb;
      tab->r[c + j] = tab->r[c + j - 1] + dr;
      tab->drdy[c + j] = slope(yb);
      // mirror side computed with its own quadrature (W may be asymmetric)
      const double drm = quad::adaptive(slope, -yb, -ya, 1e-14);
      tab->y[c - j] = -yb;
      tab->r[c - j] = tab->r[c - j + 1] - drm;
      tab->drdy[c - j] = slope(-yb);
    }
    tab->y_max = y_max;
    tab->r_max = std::min(tab->r.back(), -tab->r.front());
    return tab;
  }

  // cubic Hermite on the bracketing interval
  double r_of_y(double y) const {
    const double yc = std::clamp(y, this->y.front(), this->y.back());
    const int m = static_cast<int>(this->y.size());
    const double step = this->y_max / ((m - 1) / 2);
    int i = static_cast<int>(std::floor((yc - this->y.front()) / step));
    i = std::clamp(i, 0, m - 2);
    const double t = (yc - this->y[i]) / step;
    const double h00 = (1 + 2 * t) * sq(1 - t), h10 = t * sq(1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * this->r[i] + h10 * step * this->drdy[i] + h01 * this->r[i + 1] +
           h11 * step * this->drdy[i + 1];
  }

  double y_of_r(double rr) const {
    if (rr <= this->r.front()) return this->y.front();
    if (rr >= this->r.back()) return this->y.back();
    // binary search for the bracketing node interval (r is increasing)
    int lo = 0, hi = static_cast<int>(this->r.size()) - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (this->r[mid] <= rr ? lo : hi) = mid;
    }
    // Newton on the Hermite within [y_lo, y_hi], bisection-guarded
    double ylo = this->y[lo], yhi = this->y[hi];
    double y = 0.5 * (ylo + yhi);
    for (int it = 0; it < 80; ++it) {
      const double fr = r_of_y(y) - rr;
      if (fr > 0) yhi = y; else ylo = y;
      const double slope = (r_of_y(yhi) - r_of_y(ylo)) / std::max(yhi - ylo, 1e-300);
      double yn = y - fr / std::max(slope, 1e-300);
      if (!(yn > ylo && yn < yhi)) yn = 0.5 * (ylo + yhi);
      if (std::abs(yn - y) < 1e-15 * (1.0 + std::abs(y))) return yn;
      y = yn;
    }
    return y;
  }
};

}  // namespace detail

// The transition profile q^eps and its clamped inverse.
struct ProfileSpec {
  double eps = 0.0;
  std::function<double(double)> q;      // q^eps(r), saturates at +-(1 - kQinvClamp)
  std::function<double(double)> q_inv;  // (q^eps)^{-1}(s), argument clamped
};

inline ProfileSpec profile(const PotentialSpec& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("profile: eps must be positive");
  ProfileSpec pr;
  pr.eps = eps;
  if (p.kind == PotentialKind::standard_quartic) {
    pr.q = [eps](double r) {
      const double cap = 1.0 - kQinvClamp;
      return std::clamp(std::tanh(r / eps), -cap, cap);
    };
    pr.q_inv = [eps](double s) {
      const double cap = 1.0 - kQinvClamp;
      return eps * std::atanh(std::clamp(s, -cap, cap));
    };
    return pr;
  }
  if (!p.W) throw std::invalid_argument("profile: potential has no W callable");
  auto tab = detail::ProfileTable::build(p);
  pr.q = [tab, eps](double r) {
    const double cap = 1.0 - kQinvClamp;
    return std::clamp(std::tanh(tab->y_of_r(r / eps)), -cap, cap);
  };
  pr.q_inv = [tab, eps](double s) {
    const double cap = 1.0 - kQinvClamp;
    return eps * tab->r_of_y(std::atanh(std::clamp(s, -cap, cap)));
  };
  return pr;
}

// Structural checks on a PotentialSpec: nonnegativity and the double-well
// shape on [-1, 1], endpoint roots of W and dW, the sign split of dW at
// alpha1, convexity beyond alpha2, and the c_w bound against the eps = 1
// inverse profile. Returns ok = false with a human-readable reason.
struct WellCheckReport {
  bool ok = true;
  std::string detail;
};

inline WellCheckReport check_well_assumptions(const PotentialSpec& p, int samples = 8192) {
  auto fail = [](std::string why) { return WellCheckReport{false, std::move(why)}; };
  if (!p.W || !p.dW || !p.ddW) return fail("missing W/dW/ddW callable");
  if (std::abs(p.W(1.0)) > 1e-13 || std::abs(p.W(-1.0)) > 1e-13)
    return fail("W(+-1) must vanish");
  if (std::abs(p.dW(1.0)) > 1e-12 || std::abs(p.dW(-1.0)) > 1e-12)
    return fail("dW(+-1) must vanish");
  if (!(p.alpha1 > -1.0 && p.alpha1 < 1.0)) return fail("alpha1 must lie in (-1, 1)");
  if (!(p.alpha2 > std::abs(p.alpha1) && p.alpha2 < 1.0))
    return fail("alpha2 must lie in (|alpha1|, 1)");
  const double tiny = 1e-9;
  for (int i = 0; i <= samples; ++i) {
    const double s = -1.0 + 2.0 * i / samples;
    const double w = p.W(s);
    if (!std::isfinite(w) || w < -1e-14) return fail("W must be nonnegative on [-1, 1]");
    if (std::abs(s) < 1.0 - 1e-6 && w <= 0.0)
      return fail("W must be strictly positive inside (-1, 1)");
    const double dw = p.dW(s);
    if (s > p.alpha1 + tiny && s < 1.0 - tiny && dw >= 0.0)
      return fail("dW must be negative on (alpha1, 1)");
    if (s < p.alpha1 - tiny && s > -1.0 + tiny && dw <= 0.0)
      return fail("dW must be positive on (-1, alpha1)");
    if (std::abs(s) >= p.alpha2 && p.ddW(s) <= 0.0)
      return fail("ddW must be positive for alpha2 <= |s| <= 1");
  }
  // c_w bound: (q1^{-1})^2 W <= c_w, sampled up to the clamp
  ProfileSpec p1 = profile(p, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double s = -1.0 + 2.0 * i / samples;
    worst = std::max(worst, sq(p1.q_inv(s)) * p.W(s));
  }
  if (!(p.c_w > 0.0) || worst > p.c_w * (1.0 + 1e-9))
    return fail("c_w bound violated: sup (q1_inv)^2 W = " + std::to_string(worst) +
                " exceeds declared c_w = " + std::to_string(p.c_w));
  if (!(p.sigma > 0.0)) return fail("sigma must be positive");
  return {true, ""};
}

}  // namespace pfmc
