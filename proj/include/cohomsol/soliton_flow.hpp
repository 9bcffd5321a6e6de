#pragma once

// The soliton system away from the singular orbit: pointwise right-hand side,
// residual certificates, and continuation of a series jet by DOPRI5.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "cohomsol/dopri5.hpp"
#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"
#include "cohomsol/singular_ivp.hpp"

namespace cohomsol {

struct SolitonState {
  double t = 0.0;
  DiagonalTensor x;
  DiagonalTensor y;  // xdot / 2
  double udot = 0.0;
  double uddot = 0.0;

  /// Packed as [x, y, udot, uddot].
  Eigen::VectorXd pack() const {
    const auto s = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd v(2 * s + 2);
    v.head(s) = x.to_eigen();
    v.segment(s, s) = y.to_eigen();
    v(2 * s) = udot;
    v(2 * s + 1) = uddot;
    return v;
  }
  static SolitonState unpack(const LayoutPtr& layout, double t, const Eigen::VectorXd& v) {
    const auto s = static_cast<Eigen::Index>(layout->size());
    return {t, DiagonalTensor::from_eigen(layout, v.head(s)), DiagonalTensor::from_eigen(layout, v.segment(s, s)),
            v(2 * s), v(2 * s + 1)};
  }
};

/// Time derivative of a state; `uddd` is the third derivative of u.
struct SolitonDerivative {
  DiagonalTensor xdot, ydot;
  double uddot = 0.0;
  double uddd = 0.0;
};

/// Metric scalars of g_t = t^2 x_+ + x_- on each summand.
inline DiagonalTensor orbit_metric(const GeometrySpec& spec, double t, const DiagonalTensor& x) {
  DiagonalTensor g = x;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (spec.summand(i).block == Block::Plus) g[i] *= t * t;
  return g;
}

inline SolitonDerivative rhs(const GeometrySpec& spec, double eps, const SolitonState& s) {
  if (!(s.t > 0.0)) throw SingularTime("right-hand side evaluated at t = " + std::to_string(s.t));
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (!(s.x[i] > 0.0) || !std::isfinite(s.x[i]))
      throw SingularMetric("x on summand '" + spec.summand(i).label + "' is " + std::to_string(s.x[i]));
  const double t = s.t, k = spec.k();
  const DiagonalTensor r = ricci_endomorphism(spec, orbit_metric(spec, t, s.x));
  const DiagonalTensor xinv = s.x.inverse();
  const DiagonalTensor xp = s.x.plus_part();
  const double tr_xy = (xinv * s.y).trace();

  SolitonDerivative d;
  d.xdot = s.y * 2.0;
  d.ydot = xp * ((1.0 - k) / (t * t)) - s.y * (k / t) - xp * (tr_xy / t) + xp * (s.udot / t) +
           s.y * xinv * s.y * 2.0 + s.x * r - s.y * tr_xy + s.y * s.udot + s.x * (0.5 * eps);
  const double tr_xyxy = (xinv * s.y * xinv * s.y).trace();
  const double tr_xydot = (xinv * d.ydot).trace();
  d.uddot = s.uddot;
  d.uddd = -(k / t) * s.uddot - tr_xy * s.uddot + (k / (t * t)) * s.udot + 2.0 * tr_xyxy * s.udot -
           tr_xydot * s.udot + 2.0 * s.uddot * s.udot + eps * s.udot;
  return d;
}

/// Shape operator L = 1_+/t + x^-1 y and its derivative, given xdot and ydot.
struct ShapeOperator {
  DiagonalTensor L, Ldot;
};

inline ShapeOperator shape_operator(double t, const SolitonState& s, const DiagonalTensor& xdot,
                                    const DiagonalTensor& ydot) {
  const DiagonalTensor xinv = s.x.inverse();
  const DiagonalTensor ip = DiagonalTensor::plus_identity(s.x.layout());
  const DiagonalTensor eta = xinv * s.y;
  const DiagonalTensor etadot = xinv * ydot - xinv * xinv * xdot * s.y;
  return {ip * (1.0 / t) + eta, ip * (-1.0 / (t * t)) + etadot};
}

/// Contracted Bianchi identity u''' + tr(L) u'' + tr(Ldot) u' - 2 u'' u' - eps u', with the
/// derivatives supplied by the caller (typically from dense output).
inline double first_integral_residual(const GeometrySpec& spec, double eps, const SolitonState& s,
                                      const SolitonDerivative& d) {
  (void)spec;
  const auto S = shape_operator(s.t, s, d.xdot, d.ydot);
  return d.uddd + S.L.trace() * s.uddot + S.Ldot.trace() * s.udot - 2.0 * s.uddot * s.udot - eps * s.udot;
}

struct SolitonResidual {
  DiagonalTensor per_summand;  // r - tr(L) L - Ldot + u' L + eps/2
  double tt = 0.0;             // -tr(Ldot) - tr(L^2) + u'' + eps/2
  double norm() const { return std::max(per_summand.max_abs(), std::abs(tt)); }
};

inline SolitonResidual soliton_residual(const GeometrySpec& spec, double eps, const SolitonState& s,
                                        const SolitonDerivative& d) {
  const auto S = shape_operator(s.t, s, d.xdot, d.ydot);
  const DiagonalTensor r = ricci_endomorphism(spec, orbit_metric(spec, s.t, s.x));
  const DiagonalTensor one = DiagonalTensor::identity(s.x.layout());
  SolitonResidual out;
  out.per_summand = r - S.L * S.L.trace() - S.Ldot + S.L * s.udot + one * (0.5 * eps);
  out.tt = -S.Ldot.trace() - (S.L * S.L).trace() + d.uddot + 0.5 * eps;
  return out;
}

// ---------------------------------------------------------------------------
// Handoff from the jet

/// Size of the last retained terms of the x and u series at t0.
inline double jet_tail_estimate(const SeriesSolution& sol, double t0) {
  const auto X = sol.x_raw();
  const auto U = sol.u_raw();
  double tail = 0.0;
  for (std::size_t j = X.size() >= 2 ? X.size() - 2 : 0; j < X.size(); ++j)
    tail = std::max(tail, X[j].max_abs() * std::pow(t0, static_cast<double>(j)));
  for (std::size_t j = U.size() >= 2 ? U.size() - 2 : 0; j < U.size(); ++j)
    tail = std::max(tail, std::abs(U[j]) * std::pow(t0, static_cast<double>(j)));
  return tail;
}

/// Tail of the jet as seen by the second derivatives (which enter the residuals):
/// max over the last two retained orders of |c_j| j (j-1) t0^(j-2).
inline double jet_tail_curvature(const SeriesSolution& sol, double t0) {
  const auto X = sol.x_raw();
  const auto U = sol.u_raw();
  auto term = [t0](double c, std::size_t j) { return std::abs(c) * j * (j - 1.0) * std::pow(t0, j - 2.0); };
  double tail = 0.0;
  for (std::size_t j = X.size() - 2; j < X.size(); ++j) tail = std::max(tail, term(X[j].max_abs(), j));
  for (std::size_t j = U.size() - 2; j < U.size(); ++j) tail = std::max(tail, term(U[j], j));
  return tail;
}

/// Largest t0 <= t_max (by bisection) at which both tail estimates are below tol.
inline double choose_handoff_time(const SeriesSolution& sol, double tol = 1e-10, double t_max = 0.25) {
  auto ok = [&](double t) { return jet_tail_estimate(sol, t) < tol && jet_tail_curvature(sol, t) < tol; };
  if (ok(t_max)) return t_max;
  double lo = 0.0, hi = t_max;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

inline SolitonState state_from_jet(const SeriesSolution& sol, double t0) {
  const TensorSeries x = sol.x_series();
  const ScalarSeries u = sol.u_series();
  const ScalarSeries ud = u.derivative();
  return {t0, x.eval(t0), x.derivative().eval(t0) * 0.5, ud.eval(t0), ud.derivative().eval(t0)};
}

// ---------------------------------------------------------------------------
// Integration

struct FlowOptions {
  StepperOptions stepper;
  double handoff_tol = 1e-10;
  double degeneration_threshold = 1e-8;
  bool midpoint_samples = true;  // also sample each accepted step at its midpoint
};

struct TrajectorySample {
  SolitonState state;
  SolitonDerivative deriv;  // from the interpolant
  double first_integral = 0.0;
  double soliton_norm = 0.0;
  bool step_end = true;
};

struct Trajectory {
  LayoutPtr layout;
  double epsilon = 0.0;
  double t0 = 0.0;
  int jet_order = 0;
  double tail_estimate = 0.0;
  std::vector<TrajectorySample> samples;
  bool degenerate = false;
  double degeneration_time = std::numeric_limits<double>::quiet_NaN();
  std::string degenerate_summand;
  StepperStats stats;

  // Maxima over samples whose smallest x is at least min_x (the residuals involve x^-1 and
  // lose meaning as the metric degenerates).
  double max_first_integral(double min_x = 0.0) const {
    double m = 0;
    for (const auto& s : samples)
      if (*std::min_element(s.state.x.values().begin(), s.state.x.values().end()) >= min_x)
        m = std::max(m, std::abs(s.first_integral));
    return m;
  }
  double max_soliton_residual(double min_x = 0.0) const {
    double m = 0;
    for (const auto& s : samples)
      if (*std::min_element(s.state.x.values().begin(), s.state.x.values().end()) >= min_x)
        m = std::max(m, s.soliton_norm);
    return m;
  }
};

namespace detail {

inline SolitonDerivative unpack_derivative(const LayoutPtr& layout, const Eigen::VectorXd& v) {
  const auto s = static_cast<Eigen::Index>(layout->size());
  return {DiagonalTensor::from_eigen(layout, v.head(s)), DiagonalTensor::from_eigen(layout, v.segment(s, s)), v(2 * s),
          v(2 * s + 1)};
}

inline Eigen::VectorXd pack_derivative(const SolitonDerivative& d) {
  const auto s = static_cast<Eigen::Index>(d.xdot.size());
  Eigen::VectorXd v(2 * s + 2);
  v.head(s) = d.xdot.to_eigen();
  v.segment(s, s) = d.ydot.to_eigen();
  v(2 * s) = d.uddot;
  v(2 * s + 1) = d.uddd;
  return v;
}

}  // namespace detail

/// Integrates from a starting state to t_end, sampling at accepted step ends (and midpoints).
/// Stops cleanly when some x_i drops below the degeneration threshold.
inline Trajectory integrate_from_state(const GeometrySpec& spec, double eps, const SolitonState& start, double t_end,
                                       const FlowOptions& opt = {}) {
  const auto layout = spec.layout();
  Trajectory traj;
  traj.layout = layout;
  traj.epsilon = eps;
  traj.t0 = start.t;
  if (!(t_end > start.t)) throw InvalidInitialData("t_end must exceed the handoff time");

  auto f = [&](double t, const Eigen::VectorXd& v) {
    return detail::pack_derivative(rhs(spec, eps, SolitonState::unpack(layout, t, v)));
  };
  auto sample = [&](double t, const Eigen::VectorXd& v, const Eigen::VectorXd& dv, bool end) {
    TrajectorySample s;
    s.state = SolitonState::unpack(layout, t, v);
    s.deriv = detail::unpack_derivative(layout, dv);
    s.step_end = end;
    s.first_integral = first_integral_residual(spec, eps, s.state, s.deriv);
    s.soliton_norm = soliton_residual(spec, eps, s.state, s.deriv).norm();
    traj.samples.push_back(std::move(s));
  };
  const auto s = static_cast<Eigen::Index>(layout->size());
  auto min_x = [&](const Eigen::VectorXd& v, Eigen::Index* where) { return v.head(s).minCoeff(where); };

  const Eigen::VectorXd y0 = start.pack();
  sample(start.t, y0, f(start.t, y0), true);

  auto observer = [&](const DenseStep& st) {
    const double thr = opt.degeneration_threshold;
    // Smallest x inside the step: check the end point and any interior minimum (y_i changing sign).
    double t_hit = std::numeric_limits<double>::quiet_NaN();
    Eigen::Index which = -1;
    Eigen::Index idx;
    if (min_x(st.y1, &idx) < thr) {
      t_hit = st.t_end();
      which = idx;
    }
    for (Eigen::Index i = 0; i < s; ++i) {
      if (!(st.y0(s + i) < 0.0 && st.y1(s + i) > 0.0)) continue;
      double a = st.t, b = st.t_end();
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        (st.eval(mid)(s + i) < 0.0 ? a : b) = mid;
      }
      if (st.eval(a)(i) < thr && (std::isnan(t_hit) || a < t_hit)) {
        t_hit = a;
        which = i;
      }
    }
    if (!std::isnan(t_hit)) {
      // First crossing of the threshold by x_which.
      double a = st.t, b = t_hit;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        (st.eval(mid)(which) > thr ? a : b) = mid;
      }
      traj.degenerate = true;
      traj.degeneration_time = b;
      traj.degenerate_summand = layout->labels[static_cast<std::size_t>(which)];
      if (opt.midpoint_samples && b > st.t) {
        const double tm = 0.5 * (st.t + b);
        sample(tm, st.eval(tm), st.derivative(tm), false);
      }
      return false;
    }
    if (opt.midpoint_samples) {
      const double tm = st.t + 0.5 * st.h;
      sample(tm, st.eval(tm), st.derivative(tm), false);
    }
    sample(st.t_end(), st.y1, st.derivative(st.t_end()), true);
    return true;
  };

  traj.stats = dopri5(f, start.t, y0, t_end, opt.stepper, observer);
  return traj;
}

/// Continues a series solution from t0 (chosen automatically when not given).
inline Trajectory integrate(const GeometrySpec& spec, const SeriesSolution& sol, std::optional<double> t0, double t_end,
                            const FlowOptions& opt = {}) {
  const double t_start = t0 ? *t0 : choose_handoff_time(sol, opt.handoff_tol);
  if (!(t_start > 0.0)) throw SingularTime("handoff time must be positive");
  const double tail = jet_tail_estimate(sol, t_start);
  if (tail > opt.handoff_tol)
    throw InvalidInitialData("series tail estimate " + std::to_string(tail) + " at t0 = " + std::to_string(t_start) +
                             " exceeds the handoff tolerance; lower t0 or raise the order");
  Trajectory traj = integrate_from_state(spec, sol.epsilon, state_from_jet(sol, t_start), t_end, opt);
  traj.jet_order = sol.order;
  traj.tail_estimate = tail;
  return traj;
}

// ---------------------------------------------------------------------------
// Export

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os.precision(17);
  os << "t";
  for (const auto& l : tr.layout->labels) os << ",x_" << l;
  for (const auto& l : tr.layout->labels) os << ",y_" << l;
  os << ",udot,uddot,first_integral_residual,soliton_residual_norm\n";
  for (const auto& s : tr.samples) {
    os << s.state.t;
    for (double v : s.state.x.values()) os << ',' << v;
    for (double v : s.state.y.values()) os << ',' << v;
    os << ',' << s.state.udot << ',' << s.state.uddot << ',' << s.first_integral << ',' << s.soliton_norm << '\n';
  }
}

/// Warping functions f_i = t sqrt(x_i) on collapsing summands and sqrt(x_i) otherwise.
inline void write_plot_data(std::ostream& os, const Trajectory& tr) {
  os.precision(17);
  os << "t";
  for (const auto& l : tr.layout->labels) os << ",f_" << l;
  os << '\n';
  for (const auto& s : tr.samples) {
    os << s.state.t;
    for (std::size_t i = 0; i < s.state.x.size(); ++i) {
      const double f = std::sqrt(std::max(0.0, s.state.x[i]));
      os << ',' << (tr.layout->blocks[i] == Block::Plus ? s.state.t * f : f);
    }
    os << '\n';
  }
}

}  // namespace cohomsol
