#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pfmc/diagnostics.hpp"
#include "pfmc/fields.hpp"
#include "pfmc/solver.hpp"
#include "test_util.hpp"

using namespace pfmc;

namespace {

const PotentialSpec kPot = make_standard_potential();

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

TEST(Stability, MaxAbsDdWStandardIsFour) {
  EXPECT_DOUBLE_EQ(max_abs_ddW(kPot), 4.0);
}

TEST(Stability, DtBounds) {
  TorusGrid<2> g(128);
  const double eps = 0.04;
  EXPECT_DOUBLE_EQ(max_stable_dt(g, kPot, eps, Scheme::semi_implicit), eps * eps / 8.0);
  EXPECT_DOUBLE_EQ(max_stable_dt(g, kPot, eps, Scheme::explicit_euler),
                   std::min(g.h * g.h / 8.0, eps * eps / 8.0));
}

TEST(Stability, MakeStateValidation) {
  TorusGrid<2> g(64);
  const double eps = 0.05;
  const ProfileSpec prof = profile(kPot, eps);
  const ScalarField<2> phi0 = initial_phi(g, make_strip(), prof);
  // default dt = eps^2/10
  SimState<2> st = make_state(g, kPot, eps, phi0, Scheme::semi_implicit);
  EXPECT_DOUBLE_EQ(st.dt, eps * eps / 10.0);
  EXPECT_EQ(st.step_count, 0);
  EXPECT_DOUBLE_EQ(st.t, 0.0);
  // dt above the scheme bound rejected with the bound in the message
  try {
    make_state(g, kPot, eps, phi0, Scheme::semi_implicit, eps * eps);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("stability bound"), std::string::npos);
  }
  EXPECT_THROW(make_state(g, kPot, -0.1, phi0, Scheme::semi_implicit), std::invalid_argument);
  ScalarField<2> bad(g, 1.0);
  EXPECT_THROW(make_state(g, kPot, eps, bad, Scheme::semi_implicit), std::invalid_argument);
  bad.v[5] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(make_state(g, kPot, eps, bad, Scheme::semi_implicit), std::invalid_argument);
}

// rhs vanishes identically at the unstable well phi = 0 without forcing.
TEST(Rhs, ZeroFieldIsStationary) {
  TorusGrid<2> g(32);
  ScalarField<2> zero(g);
  SimState<2> st = make_state(g, kPot, 0.05, zero, Scheme::semi_implicit);
  const ScalarField<2> r = rhs(st);
  for (double v : r.v) EXPECT_EQ(v, 0.0);
}

// A resolved planar profile is a near-equilibrium: the rhs is small compared
// to the reaction scale and shrinks at the stencil's O(h^2) rate.
TEST(Rhs, PlanarProfileNearEquilibrium) {
  const double eps = 0.04;
  const ProfileSpec prof = profile(kPot, eps);
  auto max_rhs = [&](int n) {
    TorusGrid<2> g(n);
    const ScalarField<2> phi0 = initial_phi(g, make_strip(), prof);
    SimState<2> st = make_state(g, kPot, eps, phi0, Scheme::semi_implicit);
    return max_abs(rhs(st));
  };
  const double scale = 0.7698 / (eps * eps);  // max|W'| at s = 1/sqrt(3)
  const double r256 = max_rhs(256);
  EXPECT_LE(r256, 0.01 * scale);
  const double r128 = max_rhs(128);
  EXPECT_GE(r128 / r256, 2.5);
  EXPECT_LE(r128 / r256, 6.0);
}

// With constant forcing the forcing contribution to the rhs on a planar
// front is a pure translation: rhs_forced - rhs_free = -c d(phi)/dx near a
// front, where c = u . nu + g composes transport and forcing (nu the unit
// normal into the + phase).  Differencing the two rhs evaluations removes
// the profile's own O(h^2) equilibrium defect, isolating the speed law.
TEST(Rhs, TravelingFrontSpeedComposition) {
  const double eps = 0.04;
  const int n = 256;
  TorusGrid<2> g(n);
  const ProfileSpec prof = profile(kPot, eps);
  const ScalarField<2> phi0 = initial_phi(g, make_strip(), prof);
  VectorField<2> u(g);
  for (auto& x : u.comp[0].v) x = 0.3;
  ScalarField<2> gc(g, 0.2);
  ForcingData<2> fd = direct_forcing<2>(g, &u, &gc);
  SimState<2> forced = make_state(g, kPot, eps, phi0, Scheme::semi_implicit, 0.0, std::move(fd));
  SimState<2> free = make_state(g, kPot, eps, phi0, Scheme::semi_implicit);
  const ScalarField<2> rf = rhs(forced);
  const ScalarField<2> r0 = rhs(free);
  const VectorField<2> grad = gradient(phi0, 1);
  const double gmax = max_abs(grad.comp[0]);  // ~ 1/eps at the front
  ASSERT_GT(gmax, 10.0);
  // left front at x = 0.25: nu = +e1, c = 0.3 + 0.2 = 0.5
  // right front at x = 0.75: nu = -e1, translation speed u - g = 0.1
  auto worst_near = [&](double x_front, double c) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(i * g.h - x_front) > eps) continue;
      const double gap = rf.at(i, 0) - r0.at(i, 0) + c * grad.comp[0].at(i, 0);
      worst = std::max(worst, std::abs(gap));
    }
    return worst;
  };
  EXPECT_LE(worst_near(0.25, 0.5), 0.02 * 0.5 * gmax);
  EXPECT_LE(worst_near(0.75, 0.1), 0.02 * 0.1 * gmax);
}

TEST(Scheme, ExplicitVsSemiImplicitSecondOrderInDt) {
  // One step of each scheme from the same smooth state differs by O(dt^2).
  TorusGrid<2> g(64);
  const double eps = 0.1;
  const ScalarField<2> phi0 = make_field<2>(g, [](const Point<2>& x) {
    return 0.5 * std::sin(2.0 * detail::kPiGrid * x[0]) *
           std::cos(2.0 * detail::kPiGrid * x[1]);
  });
  auto gap = [&](double dt) {
    SimState<2> a = make_state(g, kPot, eps, phi0, Scheme::explicit_euler, dt);
    SimState<2> b = make_state(g, kPot, eps, phi0, Scheme::semi_implicit, dt);
    step(a);
    step(b);
    return pfmc_test::max_abs_diff(a.phi.v, b.phi.v);
  };
  const double dt0 = 1e-5;
  const double ratio = gap(dt0) / gap(0.5 * dt0);
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(Scheme, SchemesAgreeOnShrinkingCircle) {
  TorusGrid<2> g(128);
  const double eps = 0.05;
  const ProfileSpec prof = profile(kPot, eps);
  const ScalarField<2> phi0 = initial_phi(g, make_circle(0.3), prof);
  const double dt = 0.9 * max_stable_dt(g, kPot, eps, Scheme::explicit_euler);
  SimState<2> a = make_state(g, kPot, eps, phi0, Scheme::explicit_euler, dt);
  SimState<2> b = make_state(g, kPot, eps, phi0, Scheme::semi_implicit, dt);
  RunHooks<2> hooks;
  run(a, 0.005, hooks);
  run(b, 0.005, hooks);
  EXPECT_EQ(a.step_count, b.step_count);
  EXPECT_LE(pfmc_test::max_abs_diff(a.phi.v, b.phi.v), 5e-3);
}

TEST(Scheme, PlateauJustInsideOneStaysInside) {
  TorusGrid<2> g(32);
  const double u = 1.0 - std::nextafter(1.0, 0.0);  // one ulp below 1
  ScalarField<2> phi0(g, 1.0 - u);
  SimState<2> st = make_state(g, kPot, 0.04, phi0, Scheme::semi_implicit);
  for (int k = 0; k < 100; ++k) step(st);
  double m = 0.0;
  for (double x : st.phi.v) m = std::max(m, std::abs(x));
  EXPECT_LT(m, 1.0);
  EXPECT_GE(m, 1.0 - 4.0 * u);
}

TEST(Scheme, InvariantViolationAborts) {
  TorusGrid<2> g(32);
  const double eps = 0.05;
  const ScalarField<2> phi0 = make_field<2>(g, [](const Point<2>& x) {
    return 0.9 * std::sin(2.0 * detail::kPiGrid * x[0]);
  });
  SimState<2> st = make_state(g, kPot, eps, phi0, Scheme::explicit_euler,
                              0.9 * max_stable_dt(g, kPot, eps, Scheme::explicit_euler));
  st.dt = 50.0 * st.dt;  // deliberately break the CFL bound after construction
  try {
    for (int k = 0; k < 200; ++k) step(st);
    FAIL() << "expected invariant_violation";
  } catch (const invariant_violation& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("invariant violated"), std::string::npos);
    EXPECT_NE(msg.find("margin history"), std::string::npos);
  }
}

TEST(Scheme, TranslationEquivariance) {
  TorusGrid<2> g(64);
  const double eps = 0.06;
  const ProfileSpec prof = profile(kPot, eps);
  const ScalarField<2> phi0 = initial_phi(g, make_circle(0.25, {0.5, 0.5}), prof,
                                          {.allow_thin_clearance = true});
  const std::array<int, 2> shift = {7, -13};
  for (Scheme sch : {Scheme::explicit_euler, Scheme::semi_implicit}) {
    const double dt = 0.9 * max_stable_dt(g, kPot, eps, Scheme::explicit_euler);
    SimState<2> a = make_state(g, kPot, eps, phi0, sch, dt);
    SimState<2> b = make_state(g, kPot, eps, shift_field(phi0, shift), sch, dt);
    for (int k = 0; k < 5; ++k) {
      step(a);
      step(b);
    }
    const ScalarField<2> moved = shift_field(a.phi, shift);
    if (sch == Scheme::explicit_euler) {
      for (std::size_t i = 0; i < moved.v.size(); ++i) EXPECT_EQ(moved.v[i], b.phi.v[i]);
    } else {
      EXPECT_LE(pfmc_test::max_abs_diff(moved.v, b.phi.v), 1e-12);
    }
  }
}

TEST(RunLoop, HookCadenceAndFinalStep) {
  TorusGrid<2> g(32);
  const double eps = 0.05;
  ScalarField<2> phi0(g, 0.0);
  SimState<2> st = make_state(g, kPot, eps, phi0, Scheme::semi_implicit);
  std::vector<double> hook_times;
  std::vector<std::int64_t> hook_steps;
  RunHooks<2> hooks;
  hooks.cadence = 3;
  hooks.on_hook = [&](const SimState<2>& s) {
    hook_times.push_back(s.t);
    hook_steps.push_back(s.step_count);
  };
  const std::string reason = run(st, 10.0 * st.dt - 1e-13, hooks);
  EXPECT_EQ(reason, "t_end");
  ASSERT_EQ(hook_steps, (std::vector<std::int64_t>{3, 6, 9, 10}));
  for (std::size_t i = 0; i < hook_steps.size(); ++i)
    EXPECT_EQ(hook_times[i], static_cast<double>(hook_steps[i]) * st.dt);
}

TEST(RunLoop, ZeroSpanEmitsNothing) {
  TorusGrid<2> g(32);
  ScalarField<2> phi0(g, 0.0);
  SimState<2> st = make_state(g, kPot, 0.05, phi0, Scheme::semi_implicit);
  int calls = 0;
  RunHooks<2> hooks;
  hooks.on_hook = [&](const SimState<2>&) { ++calls; };
  EXPECT_EQ(run(st, st.t, hooks), "t_end");
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(st.step_count, 0);
  EXPECT_THROW(run(st, -1.0, hooks), std::invalid_argument);
}

TEST(RunLoop, FinalIntervalOvershootsByLessThanDt) {
  TorusGrid<2> g(32);
  ScalarField<2> phi0(g, 0.0);
  SimState<2> st = make_state(g, kPot, 0.05, phi0, Scheme::semi_implicit, 3e-4);
  RunHooks<2> hooks;
  run(st, 1e-3, hooks);
  EXPECT_EQ(st.step_count, 4);
  EXPECT_GE(st.t, 1e-3);
  EXPECT_LT(st.t, 1e-3 + st.dt);
}

TEST(RunLoop, StopPredicateEndsEarly) {
  TorusGrid<2> g(32);
  ScalarField<2> phi0(g, 0.0);
  SimState<2> st = make_state(g, kPot, 0.05, phi0, Scheme::semi_implicit);
  RunHooks<2> hooks;
  hooks.cadence = 1;
  hooks.stop = [](const SimState<2>& s) { return s.step_count >= 5; };
  EXPECT_EQ(run(st, 100.0 * st.dt, hooks), "stopped");
  EXPECT_EQ(st.step_count, 5);
}

TEST(RunLoop, CadenceLargerThanStepsStillEmitsFinal) {
  TorusGrid<2> g(32);
  ScalarField<2> phi0(g, 0.0);
  SimState<2> st = make_state(g, kPot, 0.05, phi0, Scheme::semi_implicit);
  int calls = 0;
  RunHooks<2> hooks;
  hooks.cadence = 1000;
  hooks.on_hook = [&](const SimState<2>&) { ++calls; };
  run(st, 7.0 * st.dt - 1e-13, hooks);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(st.step_count, 7);
}

// Workers must not change the trajectory beyond roundoff-free identity for
// the explicit stencil and spectral-roundoff identity for the IMEX solve.
TEST(RunLoop, WorkerCountLeavesTrajectoryUnchanged) {
  TorusGrid<2> g(64);
  const double eps = 0.06;  // 4 eps = 0.24 below the strip clearance 0.25
  const ProfileSpec prof = profile(kPot, eps);
  const ScalarField<2> phi0 = initial_phi(g, make_strip(), prof);
  SimState<2> a = make_state(g, kPot, eps, phi0, Scheme::semi_implicit, 0.0, {}, 1);
  SimState<2> b = make_state(g, kPot, eps, phi0, Scheme::semi_implicit, 0.0, {}, 3);
  for (int k = 0; k < 10; ++k) {
    step(a);
    step(b);
  }
  for (std::size_t i = 0; i < a.phi.v.size(); ++i) EXPECT_EQ(a.phi.v[i], b.phi.v[i]);
}

}  // namespace
