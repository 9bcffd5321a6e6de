#pragma once

// Formal power-series solution of the soliton system at the singular orbit.
//
// Unknowns are x(t) (metric on G/K, x(0) = identity) and the potential u(t). With
// y = xdot / 2 the system is
//
//   ydot = (1-k) x_+ / t^2 - (k/t) y - (1/t) tr(x^-1 y) x_+ + (1/t) udot x_+
//          + 2 y x^-1 y + x r - tr(x^-1 y) y + udot y + (eps/2) x
//   u''' = -(k/t) u'' - tr(x^-1 y) u'' + (k/t^2) u' + 2 tr(x^-1 y x^-1 y) u'
//          - tr(x^-1 ydot) u' + 2 u'' u' + eps u'
//
// where r is the Ricci endomorphism of g_t = t^2 x_+ + x_-. Internally the jet is
// kept as raw Taylor coefficients X_j (x = sum X_j t^j); the reported jet uses the
// factorial normalization x_m = m! X_m.

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"
#include "cohomsol/series.hpp"

namespace cohomsol {

struct InitialData {
  double epsilon = 0.0;
  DiagonalTensor L1;  // second fundamental form of the singular orbit; Minus-supported, trace free
  double u2 = 0.0;    // u''(0)
  std::map<int, std::vector<double>> kernel_params;  // order m -> coefficients over kernel_basis(m)
  int order = 12;
};

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Rejects data that cannot come from a minimal singular orbit.
inline void validate_initial_data(const GeometrySpec& spec, const InitialData& data) {
  if (!std::isfinite(data.epsilon) || !std::isfinite(data.u2)) throw InvalidInitialData("epsilon and u2 must be finite");
  if (data.order < 2) throw InvalidInitialData("series order must be at least 2");
  if (!data.L1.layout() || data.L1.size() != spec.num_summands())
    throw InvalidInitialData("L1 must have one entry per summand");
  double scale = 1.0;
  for (std::size_t i = 0; i < data.L1.size(); ++i) {
    if (!std::isfinite(data.L1[i])) throw InvalidInitialData("L1 entries must be finite");
    if (spec.summand(i).block == Block::Plus && data.L1[i] != 0.0)
      throw InvalidInitialData("L1 must vanish on the collapsing summand '" + spec.summand(i).label + "'");
    scale = std::max(scale, std::abs(data.L1[i]));
  }
  if (std::abs(data.L1.trace()) > 1e-12 * scale)
    throw InvalidInitialData("tr(L1) = " + std::to_string(data.L1.trace()) +
                             " but a minimal singular orbit has trace-free shape operator");
  for (const auto& [m, c] : data.kernel_params)
    if (m < 0 || m > data.order - 2)
      throw InvalidInitialData("kernel parameters given at order " + std::to_string(m) + ", outside 0.." +
                               std::to_string(data.order - 2));
}

/// Builds InitialData from labelled L1 entries; unlisted summands get 0.
inline InitialData make_initial_data(const GeometrySpec& spec, double epsilon, double u2,
                                     const std::map<std::string, double>& L1 = {}, int order = 12,
                                     std::map<int, std::vector<double>> kernel_params = {}) {
  InitialData d;
  d.epsilon = epsilon;
  d.u2 = u2;
  d.order = order;
  d.kernel_params = std::move(kernel_params);
  d.L1 = DiagonalTensor::zero(spec.layout());
  for (const auto& [label, v] : L1) {
    const int i = spec.layout()->index_of(label);
    if (i < 0) throw InvalidInitialData("L1 names unknown summand '" + label + "'");
    d.L1[static_cast<std::size_t>(i)] = v;
  }
  validate_initial_data(spec, d);
  return d;
}

// ---------------------------------------------------------------------------
// Equation residuals in series arithmetic

namespace detail {

inline TensorSeries raw_series(const LayoutPtr& layout, const std::vector<DiagonalTensor>& X) {
  return TensorSeries::from_coefficients(layout, X);
}

inline ScalarSeries raw_series(const std::vector<double>& U) { return {0, U}; }

/// u' with its vanishing constant term removed, so products keep full validity.
inline ScalarSeries velocity(const ScalarSeries& u) {
  ScalarSeries ud = u.derivative();
  if (std::abs(ud.coeff(0)) > 1e-12) throw InvalidInitialData("u'(0) must vanish");
  return ud.dropped_below(1);
}

}  // namespace detail

/// Residual ydot - RHS of the x-equation, valid through t^through.
/// Uses x only through t^(through+2) and u only through t^(through+2).
inline TensorSeries x_equation_residual(const GeometrySpec& spec, const TensorSeries& x, const ScalarSeries& u,
                                        double epsilon, int through) {
  const double k = spec.k();
  const TensorSeries xs = x.truncated(through + 2);
  const ScalarSeries us = u.truncated(through + 2);
  const TensorSeries y = xs.derivative() * 0.5;
  const TensorSeries ydot = y.derivative();
  const TensorSeries xinv = xs.inverse();
  const TensorSeries xp = xs.plus_part();
  const ScalarSeries ud = detail::velocity(us);
  const ScalarSeries tr_xy = (xinv * y).trace();
  const TensorSeries r = ricci_series(spec, xs, through);

  const TensorSeries rhs = xp.shifted(-2) * (1.0 - k) - y.shifted(-1) * k - xp * tr_xy.shifted(-1) +
                           xp * ud.shifted(-1) + y * xinv * y * 2.0 + xs * r - y * tr_xy + y * ud +
                           xs * (0.5 * epsilon);
  return (ydot - rhs).truncated(through);
}

/// Residual of the u-equation (third order form), valid through t^through.
/// Uses x only through t^(through+1) and u only through t^(through+3).
inline ScalarSeries u_equation_residual(const GeometrySpec& spec, const TensorSeries& x, const ScalarSeries& u,
                                        double epsilon, int through) {
  const double k = spec.k();
  const TensorSeries xs = x.truncated(through + 1);
  const ScalarSeries us = u.truncated(through + 3);
  const TensorSeries y = xs.derivative() * 0.5;
  const TensorSeries ydot = y.derivative();
  const TensorSeries xinv = xs.inverse();
  const ScalarSeries ud = detail::velocity(us);
  const ScalarSeries udd = ud.derivative();
  const ScalarSeries uddd = udd.derivative();
  const TensorSeries xy = xinv * y;
  const ScalarSeries tr_xy = xy.trace();
  const ScalarSeries tr_xyxy = (xy * xy).trace();
  const ScalarSeries tr_xydot = (xinv * ydot).trace();

  const ScalarSeries res = uddd + udd.shifted(-1) * k + tr_xy * udd - ud.shifted(-2) * k - tr_xyxy * ud * 2.0 +
                           tr_xydot * ud - udd * ud * 2.0 - ud * epsilon;
  return res.truncated(through);
}

// ---------------------------------------------------------------------------
// Initial conditions

/// A(x) = (1-k) x_+ + x r_sing(x), the t^-2 part of the x-equation at constant x.
inline DiagonalTensor singular_part_A(const GeometrySpec& spec, const DiagonalTensor& x) {
  return x.plus_part() * (1.0 - spec.k()) + x * singular_ricci(spec, x);
}

/// B(x, y) = -k y - tr(x^-1 y) x_+, the t^-1 part coming from the first-order terms.
inline DiagonalTensor singular_part_B(const GeometrySpec& spec, const DiagonalTensor& x, const DiagonalTensor& y) {
  return y * (-static_cast<double>(spec.k())) - x.plus_part() * (x.inverse() * y).trace();
}

/// Central difference of A at x in direction v.
inline DiagonalTensor directional_dA(const GeometrySpec& spec, const DiagonalTensor& x, const DiagonalTensor& v,
                                     double h = 1e-6) {
  return (singular_part_A(spec, x + v * h) - singular_part_A(spec, x - v * h)) * (0.5 / h);
}

/// The four solvability conditions at t = 0. The scalar ones use
/// Atilde(v) = -k v (the t^-2 coefficient of the u-equation with u'(0) = v) and
/// Btilde(0, w) = k w.
inline ValidationReport check_initial_conditions(const GeometrySpec& spec, const InitialData& data,
                                                 double tol = 1e-8) {
  validate_initial_data(spec, data);
  const auto I = DiagonalTensor::identity(spec.layout());
  const double k = spec.k();
  ValidationReport rep;
  auto add = [&](const std::string& name, double dev, double scale) {
    rep.checks.push_back({name, dev <= tol * std::max(1.0, scale), dev, ""});
  };
  add("A(identity)", singular_part_A(spec, I).max_abs(), 1.0);
  const DiagonalTensor& b = data.L1;
  const DiagonalTensor first = directional_dA(spec, I, b) * 2.0 + singular_part_B(spec, I, b);
  add("2 dA.b + B(identity, b)", first.max_abs(), b.max_abs());
  auto Atilde = [k](double v) { return -k * v; };
  add("Atilde(0)", std::abs(Atilde(0.0)), 1.0);
  const double h = 1e-6;
  const double dAtilde = (Atilde(data.u2 * h) - Atilde(-data.u2 * h)) / (2.0 * h);
  add("dAtilde.u2 + Btilde(0, u2)", std::abs(dAtilde + k * data.u2), std::abs(data.u2));
  return rep;
}

inline void require_initial_conditions(const GeometrySpec& spec, const InitialData& data) {
  const auto rep = check_initial_conditions(spec, data);
  for (const auto& c : rep.checks)
    if (!c.passed)
      throw InitialConditionViolated(c.name + " = " + std::to_string(c.max_deviation) + " exceeds 1e-8");
}

// ---------------------------------------------------------------------------
// Linear operators of the recursion

struct OperatorMatrix {
  Eigen::MatrixXd matrix;  // acts on summand coordinates
  int m = 0;
  LayoutPtr layout;

  DiagonalTensor apply(const DiagonalTensor& v) const { return DiagonalTensor::from_eigen(layout, matrix * v.to_eigen()); }
};

/// Closed form of the order-m operator: on Plus rows
///   m (1 + (k+1)/(m+2)) xi_+ + (4 tr(xi_+)/(m+2) + tr xi) 1_+,
/// on Minus rows (m+1+k) xi_- - C xi_- / (m+2), with C the Casimir on diagonal tensors.
/// Minus directions feed the Plus rows through tr xi, so the matrix is block lower-triangular.
inline OperatorMatrix build_Lm(const GeometrySpec& spec, int m) {
  if (m < 0) throw GeometryError("operator order must be >= 0");
  const auto s = static_cast<Eigen::Index>(spec.num_summands());
  const double k = spec.k();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    if (spec.summand(i).block != Block::Plus) continue;
    for (Eigen::Index j = 0; j < s; ++j) {
      const double dj = spec.summand(j).dim;
      L(i, j) += dj;
      if (spec.summand(j).block == Block::Plus) L(i, j) += 4.0 * dj / (m + 2);
    }
    L(i, i) += m * (1.0 + (k + 1.0) / (m + 2));
  }
  const auto minus = spec.summands_in(Block::Minus);
  if (!minus.empty()) {
    const Eigen::MatrixXd C = casimir_tensor_operator(spec);
    for (std::size_t a = 0; a < minus.size(); ++a) {
      for (std::size_t b = 0; b < minus.size(); ++b) L(minus[a], minus[b]) = -C(a, b) / (m + 2);
      L(minus[a], minus[a]) += m + 1 + k;
    }
  }
  return {L, m, spec.layout()};
}

/// The same operator from its defining form (m+1) - 2/(m+2) dA - d_y B, with dA by
/// central differences at the identity.
inline OperatorMatrix build_Lm_from_definition(const GeometrySpec& spec, int m, double h = 1e-6) {
  const auto s = spec.num_summands();
  const auto I = DiagonalTensor::identity(spec.layout());
  Eigen::MatrixXd L(s, s);
  for (std::size_t j = 0; j < s; ++j) {
    const auto e = DiagonalTensor::unit(spec.layout(), j);
    const DiagonalTensor col =
        e * (m + 1.0) - directional_dA(spec, I, e, h) * (2.0 / (m + 2)) - singular_part_B(spec, I, e);
    L.col(static_cast<Eigen::Index>(j)) = col.to_eigen();
  }
  return {L, m, spec.layout()};
}

inline double build_Ltilde(int k, int m) { return (m + 1.0) - static_cast<double>(k) / (m + 2) + k; }

/// Pseudo-inverse data of L_m in the dim-weighted inner product <a, b> = sum d_i a_i b_i.
struct WeightedSolve {
  Eigen::MatrixXd kernel;  // columns: weighted-orthonormal kernel basis
  DiagonalTensor solution;
  double residual = 0.0;
};

namespace detail {

inline Eigen::VectorXd sqrt_dims(const GeometrySpec& spec) {
  Eigen::VectorXd w(spec.num_summands());
  for (std::size_t i = 0; i < spec.num_summands(); ++i) w(static_cast<Eigen::Index>(i)) = std::sqrt(spec.summand(i).dim);
  return w;
}

/// Kernel of L (columns weighted-orthonormal, sign fixed by the largest entry) and the
/// minimum weighted-norm least-squares solution of L xi = rhs.
inline WeightedSolve weighted_lsq(const OperatorMatrix& L, const Eigen::VectorXd& w, const Eigen::VectorXd* rhs,
                                  double threshold = 1e-9) {
  const Eigen::MatrixXd Lw = L.matrix * w.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > threshold * std::max(smax, 1e-300)) ++rank;
  const Eigen::Index n = Lw.cols();
  Eigen::MatrixXd K = svd.matrixV().rightCols(n - rank);
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    Eigen::Index imax = 0;
    K.col(c).cwiseAbs().maxCoeff(&imax);
    if (K(imax, c) < 0) K.col(c) *= -1.0;
  }
  WeightedSolve out;
  out.kernel = w.cwiseInverse().asDiagonal() * K;
  if (rhs) {
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd Ub = svd.matrixU().transpose() * *rhs;
    for (Eigen::Index i = 0; i < rank; ++i) eta += svd.matrixV().col(i) * (Ub(i) / sv(i));
    const Eigen::VectorXd xi = w.cwiseInverse().asDiagonal() * eta;
    out.solution = DiagonalTensor::from_eigen(L.layout, xi);
    out.residual = (L.matrix * xi - *rhs).norm();
  }
  return out;
}

}  // namespace detail

/// Weighted-orthonormal basis of ker L_m, singular values below 1e-9 of the largest dropped.
inline std::vector<DiagonalTensor> kernel_basis(const GeometrySpec& spec, int m) {
  const auto L = build_Lm(spec, m);
  const auto sol = detail::weighted_lsq(L, detail::sqrt_dims(spec), nullptr);
  std::vector<DiagonalTensor> out;
  for (Eigen::Index c = 0; c < sol.kernel.cols(); ++c)
    out.push_back(DiagonalTensor::from_eigen(spec.layout(), sol.kernel.col(c)));
  return out;
}

// ---------------------------------------------------------------------------
// The recursion

struct KernelInjection {
  int m = 0;
  std::vector<double> coefficients;
  DiagonalTensor delta;  // added to x_{m+2} (factorial normalization)
};

struct SeriesSolution {
  LayoutPtr layout;
  int order = 0;                        // x known through t^order, u through t^(order+1)
  std::vector<DiagonalTensor> x_jet;    // x_m = m! X_m, m = 0..order
  std::vector<double> u_jet;            // u_m, m = 0..order+1
  std::vector<DiagonalTensor> D;        // D_m with L_m x_{m+2} = D_m, m = 0..order-2
  std::vector<double> Dtilde;           // Ltilde_m u_{m+3} = Dtilde_m
  std::vector<double> x_consistency;    // relative out-of-range part of D_m
  std::vector<double> u_consistency;    // relative residual of the scalar solve
  std::vector<KernelInjection> free_param_log;
  double epsilon = 0.0;

  std::vector<DiagonalTensor> x_raw() const {
    std::vector<DiagonalTensor> X;
    for (std::size_t m = 0; m < x_jet.size(); ++m) X.push_back(x_jet[m] * (1.0 / factorial(static_cast<int>(m))));
    return X;
  }
  std::vector<double> u_raw() const {
    std::vector<double> U;
    for (std::size_t m = 0; m < u_jet.size(); ++m) U.push_back(u_jet[m] / factorial(static_cast<int>(m)));
    return U;
  }
  TensorSeries x_series() const { return TensorSeries::from_coefficients(layout, x_raw()); }
  ScalarSeries u_series() const { return {0, u_raw()}; }
};

/// Order-m coefficient of the x-equation residual for the raw jet X (through m+2) and U (through m+2).
inline DiagonalTensor x_residual_coefficient(const GeometrySpec& spec, const std::vector<DiagonalTensor>& X,
                                             const std::vector<double>& U, double epsilon, int m) {
  return x_equation_residual(spec, detail::raw_series(spec.layout(), X), detail::raw_series(U), epsilon, m).coeff(m);
}

/// L_m recovered from the exact linear dependence of the order-m residual on X_{m+2}.
inline OperatorMatrix operator_from_residual(const GeometrySpec& spec, const SeriesSolution& sol, int m) {
  auto X = sol.x_raw();
  auto U = sol.u_raw();
  X.resize(static_cast<std::size_t>(m + 3), DiagonalTensor::zero(spec.layout()));
  U.resize(static_cast<std::size_t>(m + 3));
  X[static_cast<std::size_t>(m + 2)] = DiagonalTensor::zero(spec.layout());
  const DiagonalTensor base = x_residual_coefficient(spec, X, U, sol.epsilon, m);
  const auto s = spec.num_summands();
  Eigen::MatrixXd L(s, s);
  for (std::size_t j = 0; j < s; ++j) {
    X[static_cast<std::size_t>(m + 2)] = DiagonalTensor::unit(spec.layout(), j);
    const DiagonalTensor col = x_residual_coefficient(spec, X, U, sol.epsilon, m) - base;
    L.col(static_cast<Eigen::Index>(j)) = col.to_eigen() * (2.0 / (m + 2));
  }
  return {L, m, spec.layout()};
}

/// Solves the recursion for m = 0..order-2: x_{m+2} from L_m x_{m+2} = D_m (least squares plus
/// kernel injection), then u_{m+3} from Ltilde_m u_{m+3} = Dtilde_m. Each residual is evaluated
/// on series truncated to the coefficients already fixed, so any dependence on a later unknown
/// surfaces as SeriesOrderExceeded.
inline SeriesSolution solve_series(const GeometrySpec& spec, const InitialData& data, double consistency_tol = 1e-8,
                                   double parity_tol = 1e-9) {
  require_initial_conditions(spec, data);
  const auto layout = spec.layout();
  const int N = data.order;
  const int k = spec.k();
  const Eigen::VectorXd w = detail::sqrt_dims(spec);

  std::vector<DiagonalTensor> X{DiagonalTensor::identity(layout), data.L1 * 2.0};
  std::vector<double> U{0.0, 0.0, 0.5 * data.u2};

  SeriesSolution sol;
  sol.layout = layout;
  sol.order = N;
  sol.epsilon = data.epsilon;

  for (int m = 0; m <= N - 2; ++m) {
    // x_{m+2}
    X.push_back(DiagonalTensor::zero(layout));
    const DiagonalTensor R = x_residual_coefficient(spec, X, U, data.epsilon, m);
    const double norm_m = factorial(m + 2);
    const DiagonalTensor Dm = R * (-2.0 / (m + 2) * norm_m);
    const OperatorMatrix L = build_Lm(spec, m);
    const Eigen::VectorXd rhs = Dm.to_eigen();
    const auto ws = detail::weighted_lsq(L, w, &rhs);
    const double rel = ws.residual / std::max(1.0, rhs.norm());
    if (rel > consistency_tol)
      throw ConsistencyViolated("order " + std::to_string(m) + ": D_m has a component of relative size " +
                                std::to_string(rel) + " outside the image of L_m");
    DiagonalTensor xm2 = ws.solution;

    const auto it = data.kernel_params.find(m);
    if (it != data.kernel_params.end()) {
      if (static_cast<Eigen::Index>(it->second.size()) != ws.kernel.cols())
        throw InvalidInitialData("order " + std::to_string(m) + " has a " + std::to_string(ws.kernel.cols()) +
                                 "-dimensional kernel but " + std::to_string(it->second.size()) +
                                 " kernel parameters were given");
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(ws.kernel.rows());
      for (std::size_t j = 0; j < it->second.size(); ++j) delta += it->second[j] * ws.kernel.col(static_cast<Eigen::Index>(j));
      const DiagonalTensor d = DiagonalTensor::from_eigen(layout, delta);
      xm2 = xm2 + d;
      sol.free_param_log.push_back({m, it->second, d});
    }
    X.back() = xm2 * (1.0 / norm_m);
    sol.D.push_back(Dm);
    sol.x_consistency.push_back(rel);

    // u_{m+3}
    U.push_back(0.0);
    const double Ru = u_equation_residual(spec, detail::raw_series(layout, X), detail::raw_series(U), data.epsilon, m)
                          .coeff(m);
    const double Lt = build_Ltilde(k, m);
    const double Dt = -factorial(m + 1) * Ru;
    double u_next = Dt / Lt;  // factorial normalization
    if ((m + 3) % 2 == 1) {
      double scale = 1.0;
      for (std::size_t j = 0; j < U.size(); ++j) scale = std::max(scale, std::abs(U[j]) * factorial(static_cast<int>(j)));
      if (std::abs(u_next) > parity_tol * scale)
        throw ParityViolated("odd coefficient u_" + std::to_string(m + 3) + " = " + std::to_string(u_next));
      u_next = 0.0;
    }
    U.back() = u_next / factorial(m + 3);
    const double Ru_after =
        u_equation_residual(spec, detail::raw_series(layout, X), detail::raw_series(U), data.epsilon, m).coeff(m) *
        factorial(m + 1);
    sol.Dtilde.push_back(Dt);
    sol.u_consistency.push_back(std::abs(Ru_after) / std::max(1.0, std::abs(Dt)));
  }

  for (std::size_t m = 0; m < X.size(); ++m) sol.x_jet.push_back(X[m] * factorial(static_cast<int>(m)));
  for (std::size_t m = 0; m < U.size(); ++m) sol.u_jet.push_back(U[m] * factorial(static_cast<int>(m)));
  return sol;
}

// ---------------------------------------------------------------------------
// Export

/// Jet rows (kind, summand_label or "-", m, coefficient, consistency_residual). The residual
/// column carries the certificate of the step that produced the coefficient (0 for seeds).
inline void write_jet_csv(std::ostream& os, const SeriesSolution& sol) {
  os << "kind,label,m,coefficient,consistency_residual\n";
  os.precision(17);
  for (std::size_t m = 0; m < sol.x_jet.size(); ++m) {
    const double res = m >= 2 ? sol.x_consistency[m - 2] : 0.0;
    for (std::size_t i = 0; i < sol.x_jet[m].size(); ++i)
      os << "x," << sol.layout->labels[i] << ',' << m << ',' << sol.x_jet[m][i] << ',' << res << '\n';
  }
  for (std::size_t m = 0; m < sol.u_jet.size(); ++m) {
    const double res = m >= 3 ? sol.u_consistency[m - 3] : 0.0;
    os << "u,-," << m << ',' << sol.u_jet[m] << ',' << res << '\n';
  }
}

/// Kernel report rows (m, kernel_dim, vector, summand_label, value) for m = 0..max_m.
inline void write_kernel_report(std::ostream& os, const GeometrySpec& spec, int max_m) {
  os << "m,kernel_dim,vector,summand_label,value\n";
  os.precision(17);
  for (int m = 0; m <= max_m; ++m) {
    const auto basis = kernel_basis(spec, m);
    if (basis.empty()) {
      os << m << ",0,-,-,\n";
      continue;
    }
    for (std::size_t v = 0; v < basis.size(); ++v)
      for (std::size_t i = 0; i < basis[v].size(); ++i)
        os << m << ',' << basis.size() << ',' << v << ',' << spec.summand(i).label << ',' << basis[v][i] << '\n';
  }
}

}  // namespace cohomsol
