#pragma once

// Shared numerical utilities: adaptive Simpson quadrature, an embedded
// Cash-Karp Runge-Kutta integrator for scalar ODEs, and finite-difference
// derivative stencils used by self-checks and tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace pfmc {

inline double sq(double x) { return x * x; }

namespace quad {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b]; tol is absolute. Non-finite samples are rejected.
inline double adaptive(const std::function<double(double)>& f0, double a, double b,
                       double tol = 1e-11) {
  std::function<double(double)> f = [&f0](double x) {
    const double v = f0(x);
    if (!std::isfinite(v))
      throw std::invalid_argument("quadrature: non-finite integrand sample");
    return v;
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = detail::simpson(a, b, fa, fm, fb);
  return detail::adaptive_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Fixed composite Simpson with `intervals` (even) subintervals; used by
// refinement-invariance tests.
inline double composite_simpson(const std::function<double(double)>& f, double a, double b,
                                int intervals) {
  if (intervals < 2 || intervals % 2 != 0)
    throw std::invalid_argument("composite_simpson: intervals must be even and >= 2");
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace quad

namespace ode {

struct Result {
  double t = 0.0;
  double y = 0.0;
  bool stopped = false;  // halted by the stop predicate before reaching t1
};

// Adaptive Cash-Karp RK45 for y' = f(t, y) from (t0, y0) to t1.
// If `stop` is given and fires, integration bisects the final step down to
// time resolution `tol` and returns the first state satisfying the predicate.
inline Result integrate(const std::function<double(double, double)>& f, double t0, double y0,
                        double t1, double tol = 1e-10,
                        const std::function<bool(double, double)>& stop = nullptr) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 3.0 / 5, c5 = 1.0, c6 = 7.0 / 8;
  static const double b21 = 1.0 / 5;
  static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                      b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static const double w1 = 37.0 / 378, w3 = 250.0 / 621, w4 = 125.0 / 594, w6 = 512.0 / 1771;
  static const double e1 = w1 - 2825.0 / 27648, e3 = w3 - 18575.0 / 48384,
                      e4 = w4 - 13525.0 / 55296, e5 = -277.0 / 14336, e6 = w6 - 1.0 / 4;

  double t = t0, y = y0;
  if (t1 <= t0) return {t0, y0, false};
  double h = (t1 - t0) / 64.0;
  const double hmin = (t1 - t0) * 1e-15;
  int guard = 0;
  while (t < t1) {
    if (++guard > 20000000)
      throw std::runtime_error("ode::integrate: step count blowup");
    if (t + h > t1) h = t1 - t;
    const double k1 = f(t, y);
    const double k2 = f(t + c2 * h, y + h * b21 * k1);
    const double k3 = f(t + c3 * h, y + h * (b31 * k1 + b32 * k2));
    const double k4 = f(t + c4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 = f(t + c5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 = f(t + c6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const double dy = h * (w1 * k1 + w3 * k3 + w4 * k4 + w6 * k6);
    const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6));
    const double scale = tol * (1.0 + std::abs(y));
    if (err > scale && h > hmin) {
      h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
      continue;
    }
    const double yn = y + dy, tn = t + h;
    if (stop && stop(tn, yn)) {
      // bisect inside [t, tn] for the earliest stop point
      double lo = 0.0, hi = h;
      for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        // single RK4 evaluation is plenty inside one accepted step
        const double m1 = f(t, y);
        const double m2 = f(t + 0.5 * mid, y + 0.5 * mid * m1);
        const double m3 = f(t + 0.5 * mid, y + 0.5 * mid * m2);
        const double m4 = f(t + mid, y + mid * m3);
        const double ym = y + mid / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4);
        if (stop(t + mid, ym)) hi = mid; else lo = mid;
      }
      const double m1 = f(t, y);
      const double m2 = f(t + 0.5 * hi, y + 0.5 * hi * m1);
      const double m3 = f(t + 0.5 * hi, y + 0.5 * hi * m2);
      const double m4 = f(t + hi, y + hi * m3);
      return {t + hi, y + hi / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4), true};
    }
    t = tn;
    y = yn;
    if (err > 0.0) h *= std::min(5.0, 0.9 * std::pow(scale / err, 0.2));
  }
  return {t, y, false};
}

}  // namespace ode

namespace fd {

// 4th-order centered first derivative.
inline double deriv5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

}  // namespace fd

}  // namespace pfmc
