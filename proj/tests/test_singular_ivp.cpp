#include <cmath>

#include <gtest/gtest.h>

#include "cohomsol/builtins.hpp"
#include "cohomsol/singular_ivp.hpp"
#include "test_support.hpp"

using namespace cohomsol;

namespace {

SeriesSolution solve(const GeometrySpec& spec, double eps, double u2, std::map<int, std::vector<double>> kp = {},
                     int order = 12) {
  return solve_series(spec, make_initial_data(spec, eps, u2, {}, order, std::move(kp)));
}

// Raw Taylor coefficients from a symbolic expansion.
const double tanh_over_t_sq[] = {1, 0, -2.0 / 3, 0, 17.0 / 45, 0, -62.0 / 315, 0, 1382.0 / 14175, 0, -21844.0 / 467775};
const double minus_two_log_cosh[] = {0, 0, -1, 0, 1.0 / 6, 0, -2.0 / 45, 0, 17.0 / 1260, 0, -62.0 / 14175};
const double sin_over_t_sq[] = {1, 0, -1.0 / 3, 0, 2.0 / 45, 0, -1.0 / 315, 0, 2.0 / 14175, 0, -2.0 / 467775};

}  // namespace

TEST(Ltilde, ExamplesAndPositivity) {
  EXPECT_DOUBLE_EQ(build_Ltilde(1, 0), 1.5);
  EXPECT_DOUBLE_EQ(build_Ltilde(2, 0), 2.0);
  EXPECT_DOUBLE_EQ(build_Ltilde(5, 3), 8.0);
  for (int k = 1; k <= 50; ++k)
    for (int m = 0; m <= 100; ++m) EXPECT_GT(build_Ltilde(k, m), 0.0);
}

TEST(Lm, ClosedFormMatchesDefinition) {
  for (const auto& spec : testing_support::all_builtins())
    for (int m = 0; m <= 6; ++m) {
      const auto a = build_Lm(spec, m), b = build_Lm_from_definition(spec, m);
      EXPECT_LT((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-6) << spec.name() << " m=" << m;
    }
}

TEST(Lm, ClosedFormMatchesResidualJacobian) {
  for (const auto& spec : testing_support::all_builtins()) {
    const auto sol = solve(spec, 0.0, -1.0, {}, 8);
    for (int m = 0; m <= 6; ++m) {
      const auto a = build_Lm(spec, m), b = operator_from_residual(spec, sol, m);
      EXPECT_LT((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-10) << spec.name() << " m=" << m;
    }
  }
}

TEST(Lm, MinusRowsIgnorePlusColumns) {
  for (const auto& spec : testing_support::all_builtins()) {
    const auto L = build_Lm(spec, 3).matrix;
    for (int i : spec.summands_in(Block::Minus))
      for (int j : spec.summands_in(Block::Plus)) EXPECT_EQ(L(i, j), 0.0) << spec.name();
  }
}

TEST(Lm, TraceFreePlusEigenvalue) {
  const auto spec = su2_triaxial();
  const double k = spec.k();
  for (int m = 0; m <= 20; ++m) {
    const Eigen::Vector3d xi(1.0, -1.0, 0.0);
    const Eigen::Vector3d out = build_Lm(spec, m).matrix * xi;
    const double lambda = m * (1.0 + (k + 1) / (m + 2));
    EXPECT_LT((out - lambda * xi).norm(), 1e-12) << m;
    EXPECT_EQ(lambda == 0.0, m == 0);
  }
}

TEST(Lm, MinusEigenvalueWithZeroCasimir) {
  const GeometrySpec t("table", 2, 0, {{"s", 2, Block::Plus, std::nullopt}, {"q", 3, Block::Minus, 0.0}}, std::nullopt);
  EXPECT_DOUBLE_EQ(build_Lm(t, 2).matrix(1, 1), 5.0);
}

TEST(KernelBasis, SingleSphereHasNoFreedom) {
  EXPECT_TRUE(kernel_basis(bryant_sphere(3), 0).empty());
  EXPECT_TRUE(kernel_basis(bryant_sphere(3), 40).empty());
  EXPECT_EQ(kernel_basis(su2_triaxial(), 0).size(), 2u);
}

TEST(InitialConditions, BryantPasses) {
  const auto spec = bryant_sphere(3);
  const auto rep = check_initial_conditions(spec, make_initial_data(spec, 0.0, -1.0));
  ASSERT_EQ(rep.checks.size(), 4u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name;
}

TEST(InitialConditions, TraceOfL1Rejected) {
  const auto spec = stiefel(2);
  try {
    make_initial_data(spec, 0.0, -1.0, {{"p2", 0.1}});
    FAIL();
  } catch (const InvalidInitialData& e) {
    EXPECT_NE(std::string(e.what()).find("trace-free"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
  EXPECT_THROW(make_initial_data(spec, 0.0, -1.0, {{"p1", 0.1}}), InvalidInitialData);
}

// Trace-free L1 = (a, -2a) on stiefel-so(4) is a Casimir eigenvector with eigenvalue 6 != k.
TEST(InitialConditions, NonEigenShapeOperatorViolates) {
  const auto spec = stiefel(2);
  const auto data = make_initial_data(spec, 0.0, -1.0, {{"p2", 0.1}, {"p3", -0.2}});
  const auto rep = check_initial_conditions(spec, data);
  EXPECT_FALSE(rep.find("2 dA.b + B(identity, b)")->passed);
  EXPECT_NEAR(rep.find("2 dA.b + B(identity, b)")->max_deviation, (6.0 - 2.0) * 0.2, 1e-6);
  EXPECT_THROW(solve_series(spec, data), InitialConditionViolated);
}

TEST(Series, GaussianIsExact) {
  for (int k = 1; k <= 3; ++k)
    for (double eps : {-2.0, 2.0}) {
      const auto sol = solve(gaussian_flat(k), eps, -eps / 2);
      for (std::size_t m = 1; m < sol.x_jet.size(); ++m) EXPECT_EQ(sol.x_jet[m].max_abs(), 0.0);
      for (std::size_t m = 0; m < sol.u_jet.size(); ++m) EXPECT_EQ(sol.u_jet[m], m == 2 ? -eps / 2 : 0.0);
      for (const auto& D : sol.D) EXPECT_EQ(D.max_abs(), 0.0);
    }
}

TEST(Series, CigarTaylor) {
  const auto sol = solve(cigar(), 0.0, -2.0);
  const auto X = sol.x_raw();
  const auto U = sol.u_raw();
  for (int e = 0; e <= 10; ++e) {
    EXPECT_NEAR(X[e][0], tanh_over_t_sq[e], 1e-9) << e;
    EXPECT_NEAR(U[e], minus_two_log_cosh[e], 1e-9) << e;
  }
  EXPECT_NEAR(sol.x_jet[2][0], -4.0 / 3, 1e-14);
  EXPECT_NEAR(sol.u_jet[4], 4.0, 1e-13);
  EXPECT_EQ(sol.u_jet[3], 0.0);
}

TEST(Series, SineConeTaylor) {
  for (int n : {2, 3}) {
    const auto sol = solve(bryant_sphere(n), -2.0 * n, 0.0);
    for (double u : sol.u_jet) EXPECT_EQ(u, 0.0);
    const auto X = sol.x_raw();
    for (int e = 0; e <= 10; ++e) EXPECT_NEAR(X[e][0], sin_over_t_sq[e], 1e-9) << n << " " << e;
  }
}

TEST(Series, InvariantsAndCertificates) {
  for (const auto& spec : testing_support::all_builtins()) {
    const auto sol = solve(spec, 0.5, -0.7);
    EXPECT_EQ(sol.x_jet[0].values(), DiagonalTensor::identity(spec.layout()).values());
    EXPECT_EQ(sol.u_jet[1], 0.0);
    for (std::size_t m = 1; m < sol.u_jet.size(); m += 2) EXPECT_EQ(sol.u_jet[m], 0.0);
    for (double r : sol.x_consistency) EXPECT_LE(r, 1e-8);
    for (double r : sol.u_consistency) EXPECT_LE(r, 1e-8);
  }
}

// The jet truncated at N satisfies both equations through the orders it determines.
TEST(Series, OrderOfContact) {
  for (const auto& spec : testing_support::all_builtins()) {
    const auto sol = solve(spec, -0.3, -1.0);
    const int N = sol.order;
    const auto Rx = x_equation_residual(spec, sol.x_series(), sol.u_series(), sol.epsilon, N - 2);
    for (int e = Rx.lead(); e <= N - 2; ++e) EXPECT_LT(Rx.coeff(e).max_abs(), 1e-9) << spec.name() << " t^" << e;
    const auto Ru = u_equation_residual(spec, sol.x_series(), sol.u_series(), sol.epsilon, N - 2);
    for (int e = Ru.lead(); e <= N - 2; ++e) EXPECT_LT(std::abs(Ru.coeff(e)), 1e-9) << spec.name() << " t^" << e;
  }
}

TEST(Series, Reproducible) {
  const auto spec = stiefel(3);
  const auto a = solve(spec, 0.0, -1.0, {{0, {0.3}}});
  const auto b = solve(spec, 0.0, -1.0, {{0, {0.3}}});
  for (std::size_t m = 0; m < a.x_jet.size(); ++m) EXPECT_EQ(a.x_jet[m].values(), b.x_jet[m].values());
  EXPECT_EQ(a.u_jet, b.u_jet);
}

TEST(Series, KernelInjectionIsLinearAtItsOrder) {
  for (const auto& spec : {stiefel(2), su2_triaxial()}) {
    const auto basis = kernel_basis(spec, 0);
    ASSERT_FALSE(basis.empty());
    std::vector<double> c(basis.size()), c2(basis.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = 0.25 * (j + 1), c2[j] = -0.1 * (j + 2);
    const auto a = solve(spec, 0.0, -1.0, {{0, c}});
    const auto b = solve(spec, 0.0, -1.0, {{0, c2}});
    const auto z = solve(spec, 0.0, -1.0);
    auto want = DiagonalTensor::zero(spec.layout());
    for (std::size_t j = 0; j < c.size(); ++j) want = want + basis[j] * (c[j] - c2[j]);
    EXPECT_LT((a.x_jet[2] - b.x_jet[2] - want).max_abs(), 1e-13) << spec.name();
    EXPECT_GT((a.x_jet[2] - z.x_jet[2]).max_abs(), 0.1);
    ASSERT_EQ(a.free_param_log.size(), 1u);
    EXPECT_EQ(a.free_param_log[0].m, 0);
  }
}

TEST(Series, KernelParameterCountChecked) {
  EXPECT_THROW(solve(stiefel(2), 0.0, -1.0, {{0, {1.0, 2.0}}}), InvalidInitialData);
  EXPECT_THROW(solve(stiefel(2), 0.0, -1.0, {{3, {1.0}}}), InvalidInitialData);
  EXPECT_THROW(solve(stiefel(2), 0.0, -1.0, {{20, {1.0}}}), InvalidInitialData);
}
