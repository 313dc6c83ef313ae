#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfmc/diagnostics.hpp"
#include "pfmc/fields.hpp"
#include "pfmc/monotonicity.hpp"
#include "pfmc/solver.hpp"
#include "test_util.hpp"

using namespace pfmc;

namespace {

const PotentialSpec kPot = make_standard_potential();
constexpr double kPi = 3.14159265358979323846;

InitialShape<2> make_strip(double a = 0.25, double b = 0.75) {
  InitialShape<2> sh;
  sh.kind = ShapeKind::strip;
  sh.a = a;
  sh.b = b;
  return sh;
}

InitialShape<2> make_circle(double R, Point<2> c = {0.5, 0.5}) {
  InitialShape<2> sh;
  sh.kind = ShapeKind::sphere;
  sh.center = c;
  sh.radius = R;
  return sh;
}

// Independent oracle: the honest 2-d lattice sum
//   rho(x) = (4 pi tau)^{-1/2} sum_{|k_a| <= K} exp(-|x - y + k|^2 / (4 tau)),
// written as a double loop over the image lattice rather than the per-axis
// factorization used by the implementation.
double rho_lattice_oracle(const Point<2>& y, const Point<2>& x, double tau, int K) {
  double acc = 0.0;
  for (int kx = -K; kx <= K; ++kx)
    for (int ky = -K; ky <= K; ++ky) {
      const double dx = x[0] - y[0] + kx;
      const double dy = x[1] - y[1] + ky;
      acc += std::exp(-(dx * dx + dy * dy) / (4.0 * tau));
    }
  return acc / std::sqrt(4.0 * kPi * tau);
}

TEST(Kernel, PrincipalValueIsOne) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 1.0 / (4.0 * kPi);  // tau = 1/(4 pi) makes the prefactor exactly 1
  ks.K_images = 0;
  EXPECT_DOUBLE_EQ(rho_kernel(ks, ks.y, 0.0), 1.0);
}

TEST(Kernel, MatchesExplicitLatticeSum) {
  KernelSpec<2> ks;
  ks.y = {0.3, 0.7};
  ks.s = 0.3;
  ks.K_images = 12;
  const Point<2> x{0.85, 0.1};
  const double got = rho_kernel(ks, x, 0.0);
  const double want = rho_lattice_oracle(ks.y, x, 0.3, 12);
  EXPECT_NEAR(got, want, 1e-12 * want);
}

TEST(Kernel, AutoImagesCount) {
  EXPECT_EQ(auto_images(0.01), 3);   // ceil(1 + 1.2)
  EXPECT_EQ(auto_images(0.25), 7);   // ceil(1 + 6)
  EXPECT_EQ(auto_images(1.0), 13);   // ceil(1 + 12)
}

TEST(Kernel, ThetaTailNegligibleAtAutoCount) {
  // Worst case of the stated guarantee: tau = 2 (largest allowed window),
  // half-integer offset.  Adding 24 more images must not move the sum.
  const double tau = 2.0;
  const int K = auto_images(tau);
  const double a = detail::theta_sum(0.5, tau, K);
  const double b = detail::theta_sum(0.5, tau, K + 24);
  EXPECT_LE(std::abs(a - b), 1e-14 * b);
}

TEST(Kernel, DecreasesWithDistanceFromCenter) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 0.01;
  double prev = rho_kernel(ks, ks.y, 0.0);
  for (double d : {0.05, 0.1, 0.2, 0.35, 0.5}) {
    const Point<2> x{0.5 + d, 0.5};
    const double cur = rho_kernel(ks, x, 0.0);
    EXPECT_LT(cur, prev) << "not decreasing at distance " << d;
    prev = cur;
  }
}

TEST(Kernel, FieldIntegratesToSqrtFourPiTau) {
  // One theta factor integrates to sqrt(4 pi tau) over the unit circle
  // direction; with the (4 pi tau)^{-1/2} prefactor the d = 2 integral is
  // sqrt(4 pi tau).  The trapezoid rule on a smooth periodic function
  // converges spectrally, so the tolerance tests image truncation.
  TorusGrid<2> g(64);
  KernelSpec<2> ks;
  ks.y = {0.37, 0.61};
  ks.s = 0.01;
  const ScalarField<2> rho = rho_field(g, ks, 0.0);
  EXPECT_NEAR(integrate_field(rho, 1), std::sqrt(4.0 * kPi * 0.01), 1e-9);
}

TEST(Kernel, FieldMatchesPointwiseKernel) {
  TorusGrid<2> g(32);
  for (bool cutoff : {false, true}) {
    KernelSpec<2> ks;
    ks.y = {0.3, 0.55};
    ks.s = 0.05;
    ks.cutoff = cutoff;
    const double t = 0.013;
    const ScalarField<2> rho = rho_field(g, ks, t);
    double scale = 0.0;
    for (double v : rho.v) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        const Point<2> x{i * g.h, j * g.h};
        EXPECT_NEAR(rho.at(i, j), rho_kernel(ks, x, t), 1e-13 * scale)
            << "mismatch at (" << i << "," << j << ") cutoff=" << cutoff;
      }
  }
}

TEST(Kernel, CutoffZeroFarEqualNear) {
  TorusGrid<2> g(64);
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 0.02;
  ks.cutoff = true;
  const ScalarField<2> rc = rho_field(g, ks, 0.0);
  KernelSpec<2> plain = ks;
  plain.cutoff = false;
  const ScalarField<2> rp = rho_field(g, plain, 0.0);
  // exactly zero at distance >= 1/2 (corner), exactly equal at <= 1/4
  EXPECT_EQ(rc.at(0, 0), 0.0);
  EXPECT_EQ(rc.at(32, 32), rp.at(32, 32));
  EXPECT_EQ(rc.at(32 + 12, 32), rp.at(32 + 12, 32));  // dist 0.1875 < 1/4
  for (std::size_t i = 0; i < rc.v.size(); ++i) EXPECT_LE(rc.v[i], rp.v[i] + 1e-300);
}

TEST(Kernel, RejectsTimeAtOrPastS) {
  TorusGrid<2> g(16);
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 0.5;
  EXPECT_THROW(rho_kernel(ks, ks.y, 0.5), std::invalid_argument);
  EXPECT_THROW(rho_kernel(ks, ks.y, 0.7), std::invalid_argument);
  EXPECT_THROW(rho_field(g, ks, 0.5), std::invalid_argument);
}

TEST(EtaRamp, Shape) {
  EXPECT_EQ(eta_ramp(0.0), 1.0);
  EXPECT_EQ(eta_ramp(0.25), 1.0);
  EXPECT_DOUBLE_EQ(eta_ramp(0.375), 0.5);
  EXPECT_EQ(eta_ramp(0.5), 0.0);
  EXPECT_EQ(eta_ramp(0.8), 0.0);
  // monotone non-increasing, C1 at the joins
  double prev = 1.0;
  for (int k = 0; k <= 200; ++k) {
    const double cur = eta_ramp(0.25 * k / 200.0 + 0.25);
    EXPECT_LE(cur, prev + 1e-15);
    prev = cur;
  }
  EXPECT_NEAR(eta_ramp(0.25 + 1e-9), 1.0, 1e-8);
  EXPECT_NEAR(eta_ramp(0.5 - 1e-9), 0.0, 1e-8);
}

// ----------------------------------------------------------------------------
// check_monotonicity on synthetic series
// ----------------------------------------------------------------------------

std::vector<MonoPoint> ramp_points(int m, double step, double I0, double slope) {
  std::vector<MonoPoint> pts(m);
  for (int k = 0; k < m; ++k) {
    pts[k].t = k * step;
    pts[k].I = I0 + slope * pts[k].t;
  }
  return pts;
}

TEST(Checker, RejectsBadConfigurations) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 0.13;
  const double h = 1.0 / 64, dt = 1e-3;

  auto expect_reject = [&](const KernelSpec<2>& spec, std::vector<MonoPoint> pts,
                           const std::string& what) {
    try {
      check_monotonicity(spec, pts, h, dt);
      FAIL() << "expected rejection: " << what;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find(what), std::string::npos) << e.what();
    }
  };

  expect_reject(ks, ramp_points(1, 0.01, 1.0, -1.0), "two samples");

  auto bad_order = ramp_points(6, 0.01, 1.0, -1.0);
  std::swap(bad_order[2].t, bad_order[3].t);
  expect_reject(ks, bad_order, "strictly increasing");

  KernelSpec<2> early = ks;
  early.s = 0.04;  // last sample t = 0.05 >= s
  expect_reject(early, ramp_points(6, 0.01, 1.0, -1.0), "not before s");

  KernelSpec<2> wide = ks;
  wide.s = 2.3;  // s - t_first > 2
  expect_reject(wide, ramp_points(6, 0.01, 1.0, -1.0), "> 2");

  KernelSpec<2> coarse = ks;
  coarse.s = 0.1;  // (s - t_last)/max_step = 5 < 8
  expect_reject(coarse, ramp_points(6, 0.01, 1.0, -1.0), "cadence");
}

// Binary-exact step so the cadence ratio (s - t_last)/max_step is computed
// without rounding: step = 2^-7, t_last = 5 step, s = t_last + 8 step.
constexpr double kStep = 0.0078125;
constexpr double kS = 13.0 * kStep;  // 0.1015625

TEST(Checker, DecreasingSeriesPasses) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = kS;
  const double h = 1.0 / 64, dt = 1e-3;
  const MonoReport rep = check_monotonicity(ks, ramp_points(6, kStep, 1.0, -1.0), h, dt);
  ASSERT_EQ(rep.intervals.size(), 5u);
  EXPECT_TRUE(rep.all_pass);
  EXPECT_NEAR(rep.worst_margin, -kStep, 1e-12);
  EXPECT_LT(rep.worst_excess, 0.0);
  for (const auto& r : rep.intervals) {
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.margin, -kStep, 1e-12);
    EXPECT_EQ(r.rhs_integral, 0.0);
  }
}

TEST(Checker, JumpBeyondToleranceFails) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = kS;
  const double h = 1.0 / 64, dt = 1e-3;
  auto pts = ramp_points(6, kStep, 1.0, -1.0);
  for (std::size_t k = 3; k < pts.size(); ++k) pts[k].I += 0.05;  // jump on interval 2->3
  const MonoReport rep = check_monotonicity(ks, pts, h, dt);
  EXPECT_FALSE(rep.all_pass);
  int failures = 0;
  for (const auto& r : rep.intervals) failures += r.pass ? 0 : 1;
  EXPECT_EQ(failures, 1);
  EXPECT_NEAR(rep.worst_margin, 0.05 - kStep, 1e-12);
  EXPECT_GT(rep.worst_excess, 0.0);
}

TEST(Checker, TolUsesIntervalEndWeight) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = kS;
  const double h = 1.0 / 64, dt = 1e-3;
  const MonoReport rep = check_monotonicity(ks, ramp_points(6, kStep, 1.0, -1.0), h, dt);
  for (const auto& r : rep.intervals) {
    const double want = kCMono * (h * h + dt) * std::pow(ks.s - r.t1, -1.5);
    EXPECT_DOUBLE_EQ(r.tol, want);
  }
}

TEST(Checker, TrapezoidRhsAndCutoffCommutator) {
  KernelSpec<2> ks;
  ks.y = {0.5, 0.5};
  ks.s = 0.1;
  const double h = 1.0 / 64, dt = 1e-3;
  std::vector<MonoPoint> pts(2);
  pts[0].t = 0.0;
  pts[0].I = 1.0;
  pts[0].R = 3.0;
  pts[0].B = 2.0;
  pts[1].t = 0.01;
  pts[1].I = 1.0;
  pts[1].R = 5.0;
  pts[1].B = 4.0;

  const MonoReport plain = check_monotonicity(ks, pts, h, dt);
  ASSERT_EQ(plain.intervals.size(), 1u);
  EXPECT_NEAR(plain.intervals[0].rhs_integral, 0.5 * 0.01 * (3.0 + 5.0), 1e-15);
  EXPECT_NEAR(plain.intervals[0].margin, -plain.intervals[0].rhs_integral, 1e-15);

  KernelSpec<2> cut = ks;
  cut.cutoff = true;
  const MonoReport with_cut = check_monotonicity(cut, pts, h, dt);
  const double comm0 = kC3 * std::exp(-1.0 / (128.0 * (ks.s - 0.0))) * 2.0;
  const double comm1 = kC3 * std::exp(-1.0 / (128.0 * (ks.s - 0.01))) * 4.0;
  const double want = 0.5 * 0.01 * (3.0 + 5.0) + 0.5 * 0.01 * (comm0 + comm1);
  EXPECT_NEAR(with_cut.intervals[0].rhs_integral, want, 1e-15 * want);
}

// ----------------------------------------------------------------------------
// Live solver runs
// ----------------------------------------------------------------------------

// Flat front through y: transverse Gaussian integrates to 1, so the weighted
// interface energy is the unit surface density (second strip front at
// distance 1/2 adds ~ 2 exp(-6.25) ~ 0.4%).
TEST(Live, FlatFrontWeightedEnergyIsUnit) {
  TorusGrid<2> g(256);
  const double eps = 0.04;
  const ProfileSpec prof = profile(kPot, eps);
  SimState<2> st = make_state(g, kPot, eps, initial_phi(g, make_strip(), prof),
                              Scheme::semi_implicit);
  const ScalarField<2> mu = mu_density(st);

  KernelSpec<2> ks;
  ks.y = {0.25, 0.5};
  ks.s = 0.01;  // tau = 0.01 at t = 0
  const double I = weighted_integral(rho_field(g, ks, 0.0), mu);
  EXPECT_NEAR(I, 1.0, 0.05);

  KernelSpec<2> cut = ks;
  cut.cutoff = true;
  const double Ic = weighted_integral(rho_field(g, cut, 0.0), mu);
  EXPECT_LE(Ic, I + 1e-12);
  EXPECT_GE(Ic, 0.90 * I);  // ramp removes only the transverse tail past 1/4
}

struct Recorded {
  std::vector<MonoPoint> plain, cut;
};

// Record MonoPoint series for one probe over a run, both with and without
// the cutoff.  R carries the weighted forcing rate (1/(2 sigma)) int rho~
// f^2 W / eps; B the mass of B_{1/2}(y) for the commutator bound.
Recorded record_run(SimState<2>& st, const KernelSpec<2>& probe, double t_end, int cadence) {
  Recorded rec;
  KernelSpec<2> plain = probe;
  plain.cutoff = false;
  KernelSpec<2> cut = probe;
  cut.cutoff = true;
  const bool forced = st.forcing.has_u || st.forcing.has_g;
  RunHooks<2> hooks;
  hooks.cadence = cadence;
  hooks.on_hook = [&](const SimState<2>& s) {
    const ScalarField<2> mu = mu_density(s);
    ScalarField<2> rate(s.grid);
    if (forced) {
      const ScalarField<2> f = f_field(s);
      for (std::size_t i = 0; i < rate.v.size(); ++i)
        rate.v[i] = f.v[i] * f.v[i] * s.pot.W(s.phi.v[i]) / s.eps;
    }
    const ScalarField<2> xi = xi_density(s);
    ScalarField<2> axi(s.grid);
    for (std::size_t i = 0; i < axi.v.size(); ++i) axi.v[i] = std::abs(xi.v[i]);
    const double B = ball_sum(mu, probe.y, 0.5);
    for (bool cutoff : {false, true}) {
      const KernelSpec<2>& ks = cutoff ? cut : plain;
      const ScalarField<2> rho = rho_field(s.grid, ks, s.t);
      MonoPoint p;
      p.t = s.t;
      p.I = weighted_integral(rho, mu);
      p.R = forced ? weighted_integral(rho, rate) / (2.0 * s.pot.sigma) : 0.0;
      p.B = B;
      p.X = weighted_integral(rho, axi) / (ks.s - s.t);
      (cutoff ? rec.cut : rec.plain).push_back(p);
    }
  };
  run(st, t_end, hooks);
  return rec;
}

TEST(Live, ForcingFreeCircleIsMonotone) {
  TorusGrid<2> g(128);
  const double eps = 0.05;
  const ProfileSpec prof = profile(kPot, eps);

  for (const Point<2>& y : {Point<2>{0.5, 0.5}, Point<2>{0.7, 0.5}}) {
    SimState<2> st = make_state(g, kPot, eps, initial_phi(g, make_circle(0.3), prof),
                                Scheme::semi_implicit);
    KernelSpec<2> probe;
    probe.y = y;
    probe.s = 0.06;  // past t_end = 0.02; not the extinction time, so I
                     // genuinely decreases rather than staying self-similar
    const Recorded rec = record_run(st, probe, 0.02, 10);
    ASSERT_GE(rec.plain.size(), 8u);

    const MonoReport rep = check_monotonicity(probe, rec.plain, g.h, st.dt);
    EXPECT_TRUE(rep.all_pass) << "worst excess " << rep.worst_excess << " at y = (" << y[0]
                              << "," << y[1] << ")";
    EXPECT_LE(rec.plain.back().I, rec.plain.front().I);

    KernelSpec<2> cut = probe;
    cut.cutoff = true;
    const MonoReport repc = check_monotonicity(cut, rec.cut, g.h, st.dt);
    EXPECT_TRUE(repc.all_pass) << "cutoff worst excess " << repc.worst_excess;

    // rho~ <= rho pointwise, so the cutoff integral can never exceed plain
    for (std::size_t k = 0; k < rec.plain.size(); ++k)
      EXPECT_LE(rec.cut[k].I, rec.plain[k].I + 1e-12);

    std::cout << "[ probe (" << y[0] << "," << y[1] << "): worst margin " << rep.worst_margin
              << ", worst excess " << rep.worst_excess << ", cutoff margin "
              << repc.worst_margin << " ]\n";
  }
}

// Sharpest case for the tolerance model: probe at the space-time extinction
// point of the shrinking circle (center, s = R0^2/2).  The continuum weighted
// energy is constant along the self-similar flow, so the per-interval margin
// is pure discretization error — this is what calibrates kCMono.
TEST(Live, SelfSimilarProbeMarginIsDiscretizationOnly) {
  TorusGrid<2> g(128);
  const double eps = 0.05;
  const ProfileSpec prof = profile(kPot, eps);
  SimState<2> st = make_state(g, kPot, eps, initial_phi(g, make_circle(0.3), prof),
                              Scheme::semi_implicit);
  KernelSpec<2> probe;
  probe.y = {0.5, 0.5};
  probe.s = 0.045;  // extinction of the R0 = 0.3 circle: R0^2 / 2
  const Recorded rec = record_run(st, probe, 0.02, 10);

  const MonoReport rep = check_monotonicity(probe, rec.plain, g.h, st.dt);
  EXPECT_TRUE(rep.all_pass) << "worst excess " << rep.worst_excess;
  std::cout << "[ self-similar probe: worst margin " << rep.worst_margin << ", worst excess "
            << rep.worst_excess << ", I " << rec.plain.front().I << " -> "
            << rec.plain.back().I << " ]\n";
}

TEST(Live, ConstantGCircleWithinTolerance) {
  TorusGrid<2> g(128);
  const double eps = 0.05;
  const ProfileSpec prof = profile(kPot, eps);
  ForcingData<2> fd;
  {
    ScalarField<2> gc(g, 0.1);
    fd = direct_forcing<2>(g, nullptr, &gc);
  }
  SimState<2> st = make_state(g, kPot, eps, initial_phi(g, make_circle(0.3), prof),
                              Scheme::semi_implicit, 0.0, std::move(fd));
  KernelSpec<2> probe;
  probe.y = {0.5, 0.5};
  probe.s = 0.06;
  const Recorded rec = record_run(st, probe, 0.02, 10);

  const MonoReport rep = check_monotonicity(probe, rec.plain, g.h, st.dt);
  EXPECT_TRUE(rep.all_pass) << "worst excess " << rep.worst_excess;
  for (const auto& p : rec.plain) EXPECT_GT(p.R, 0.0);

  KernelSpec<2> cut = probe;
  cut.cutoff = true;
  const MonoReport repc = check_monotonicity(cut, rec.cut, g.h, st.dt);
  EXPECT_TRUE(repc.all_pass) << "cutoff worst excess " << repc.worst_excess;

  std::cout << "[ forced: worst margin " << rep.worst_margin << ", worst excess "
            << rep.worst_excess << ", cutoff margin " << repc.worst_margin << " ]\n";
}

}  // namespace
