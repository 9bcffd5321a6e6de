#include <cmath>

#include <gtest/gtest.h>

#include "cohomsol/builtins.hpp"
#include "cohomsol/closed_forms.hpp"
#include "cohomsol/soliton_flow.hpp"

using namespace cohomsol;

namespace {

SeriesSolution jet(const GeometrySpec& spec, double eps, double u2) {
  return solve_series(spec, make_initial_data(spec, eps, u2));
}

// Residuals of an exact solution supplied as f (warping of the unit sphere) and u.
struct Exact {
  double f, f1, f2, ud, udd, uddd;
};

SolitonState state_of(const GeometrySpec& spec, double t, const Exact& e, SolitonDerivative& d) {
  const double x = e.f * e.f / (t * t);
  const double xd = 2 * e.f * e.f1 / (t * t) - 2 * e.f * e.f / (t * t * t);
  const double xdd = 2 * (e.f1 * e.f1 + e.f * e.f2) / (t * t) - 8 * e.f * e.f1 / (t * t * t) + 6 * e.f * e.f / std::pow(t, 4);
  auto c = [&](double v) { return DiagonalTensor(spec.layout(), {v}); };
  d = {c(xd), c(0.5 * xdd), e.udd, e.uddd};
  return {t, c(x), c(0.5 * xd), e.ud, e.udd};
}

}  // namespace

TEST(Residuals, CigarClosedForm) {
  const auto spec = cigar();
  for (double t : {0.5, 1.0, 2.0}) {
    const double th = std::tanh(t), s = 1 - th * th;
    SolitonDerivative d;
    const auto st = state_of(spec, t, {th, s, -2 * th * s, -2 * th, -2 * s, 4 * s * th}, d);
    EXPECT_LT(soliton_residual(spec, 0.0, st, d).norm(), 1e-10) << t;
    EXPECT_LT(std::abs(first_integral_residual(spec, 0.0, st, d)), 1e-10) << t;
  }
}

TEST(Residuals, SineConeAndGaussian) {
  for (int n : {2, 3, 4}) {
    const auto spec = bryant_sphere(n);
    for (double t : {0.3, 1.0, 2.5}) {
      SolitonDerivative d;
      const auto st = state_of(spec, t, {std::sin(t), std::cos(t), -std::sin(t), 0, 0, 0}, d);
      EXPECT_LT(soliton_residual(spec, -2.0 * n, st, d).norm(), 1e-10);
      EXPECT_GT(soliton_residual(spec, -2.0 * n + 0.5, st, d).norm(), 0.2);  // wrong constant is visible
    }
  }
  const auto g = gaussian_flat(2);
  for (double eps : {-2.0, 2.0}) {
    SolitonDerivative d;
    const auto st = state_of(g, 1.3, {1.3, 1, 0, -0.5 * eps * 1.3, -0.5 * eps, 0}, d);
    EXPECT_LT(soliton_residual(g, eps, st, d).norm(), 1e-12);
  }
}

TEST(Residuals, RhsRejectsBadStates) {
  const auto spec = bryant_sphere(2);
  const auto one = DiagonalTensor::identity(spec.layout());
  EXPECT_THROW(rhs(spec, 0.0, {0.0, one, one, 0, 0}), SingularTime);
  EXPECT_THROW(rhs(spec, 0.0, {1.0, one * -1.0, one, 0, 0}), SingularMetric);
}

TEST(Flow, GaussianStaysFlat) {
  for (int k = 1; k <= 3; ++k) {
    const auto spec = gaussian_flat(k);
    const auto tr = integrate(spec, jet(spec, 2.0, -1.0), 0.05, 10.0);
    for (const auto& s : tr.samples) {
      EXPECT_LT((s.state.x - DiagonalTensor::identity(spec.layout())).max_abs(), 1e-10);
      EXPECT_NEAR(s.state.udot, -s.state.t, 1e-10);
    }
  }
}

TEST(Flow, CigarMatchesClosedForm) {
  const auto spec = cigar();
  const auto tr = integrate(spec, jet(spec, 0.0, -2.0), 0.05, 5.0);
  const auto cf = closed_form_for(spec, 0.0);
  ASSERT_TRUE(cf);
  for (const auto& s : tr.samples) {
    const auto p = cf->at(s.state.t);
    EXPECT_LT((s.state.x - p.state.x).max_abs(), 1e-7);
    EXPECT_NEAR(s.state.udot, p.state.udot, 1e-7);
  }
}

TEST(Flow, BryantFirstIntegral) {
  const auto spec = bryant_sphere(3);
  for (double u2 : {-0.5, -1.0}) {
    const auto tr = integrate(spec, jet(spec, 0.0, u2), 0.05, 10.0);
    EXPECT_FALSE(tr.degenerate);
    EXPECT_NEAR(tr.samples.back().state.t, 10.0, 1e-12);
    EXPECT_LT(tr.max_first_integral(), 1e-6);
    EXPECT_LT(tr.max_soliton_residual(), 1e-6);
  }
}

// The dense derivative of x is twice the state's y.
TEST(Flow, XdotIsTwiceY) {
  const auto spec = stiefel(3);
  const auto tr = integrate(spec, jet(spec, -1.0, -0.5), std::nullopt, 2.0);
  for (const auto& s : tr.samples) EXPECT_LT((s.deriv.xdot - s.state.y * 2.0).max_abs(), 1e-7) << s.state.t;
}

TEST(Flow, HandoffConsistency) {
  const auto spec = bryant_sphere(3);
  const auto sol = jet(spec, 0.0, -1.0);
  const auto a = integrate(spec, sol, 0.1, 1.0);
  const auto b = integrate(spec, sol, 0.05, 1.0);
  const auto& sa = a.samples.back().state;
  const auto& sb = b.samples.back().state;
  EXPECT_LT((sa.x - sb.x).max_abs(), 10 * 1e-9);
  EXPECT_NEAR(sa.udot, sb.udot, 10 * 1e-9);
}

TEST(Flow, HandoffTailTooLarge) {
  const auto spec = bryant_sphere(3);
  EXPECT_THROW(integrate(spec, jet(spec, 0.0, -1.0), 0.9, 2.0), InvalidInitialData);
}

// Dense-output first-integral residual under fixed-step halving, against the nominal order 5.
TEST(Flow, FirstIntegralConvergenceOrder) {
  const auto spec = bryant_sphere(3);
  const auto sol = jet(spec, 0.0, -1.0);
  std::vector<double> e;
  for (double h : {0.01, 0.005, 0.0025}) {
    FlowOptions o;
    o.stepper.fixed_step = h;
    e.push_back(integrate(spec, sol, 0.05, 5.0, o).max_first_integral());
  }
  const double slope = std::log2(e[0] / e[2]) / 2.0;
  EXPECT_GT(slope, 4.0);
  EXPECT_LT(slope, 6.0);
}

TEST(Flow, EinsteinSubmanifoldPreserved) {
  const auto spec = bryant_sphere(2);
  const auto tr = integrate(spec, jet(spec, -4.0, 0.0), 0.05, 3.0);
  for (const auto& s : tr.samples) EXPECT_LE(std::abs(s.state.udot), 1e-9);
}

TEST(Flow, SineConeDegeneratesAtPi) {
  for (int n : {2, 3}) {
    const auto spec = bryant_sphere(n);
    FlowOptions o;
    o.stepper.rtol = 1e-11;
    o.stepper.atol = 1e-14;
    const auto tr = integrate(spec, jet(spec, -2.0 * n, 0.0), 0.05, 4.0, o);
    ASSERT_TRUE(tr.degenerate) << n;
    EXPECT_NEAR(tr.degeneration_time, M_PI, 1e-3);
    EXPECT_EQ(tr.degenerate_summand, "sphere");
    EXPECT_LT(tr.samples.back().state.t, M_PI);
  }
}
