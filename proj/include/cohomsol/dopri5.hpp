#pragma once

// Dormand-Prince 5(4) with the standard continuous extension and PI step control.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cohomsol/errors.hpp"

namespace cohomsol {

struct StepperOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h0 = 0.0;                    // 0: pick from the tolerances
  std::optional<double> fixed_step;   // constant step, no error control
  long max_steps = 2'000'000;
  double min_step_rel = 1e-14;        // underflow when h < min_step_rel * max(1, |t|)
};

/// One accepted step with its interpolant.
struct DenseStep {
  double t = 0.0, h = 0.0;
  Eigen::VectorXd y0, y1, r2, r3, r4, r5;

  double t_end() const { return t + h; }
  Eigen::VectorXd eval(double s) const {
    const double th = (s - t) / h, th1 = 1.0 - th;
    return y0 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
  Eigen::VectorXd derivative(double s) const {
    const double th = (s - t) / h;
    const double c4 = 2.0 * th - 3.0 * th * th;
    const double c5 = 2.0 * th * (1.0 - th) * (1.0 - th) - 2.0 * th * th * (1.0 - th);
    return (r2 + (1.0 - 2.0 * th) * r3 + c4 * r4 + c5 * r5) / h;
  }
};

struct StepperStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  bool stopped_by_observer = false;
  double t_last = 0.0;
};

namespace detail {
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp
}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t_end. `observer(step)` sees each accepted step
/// and returns false to stop. Exceptions of type SingularMetric thrown by f inside a
/// trial step reject the step and shrink h (adaptive mode only).
template <class F, class Observer>
StepperStats dopri5(F&& f, double t0, Eigen::VectorXd y, double t_end, const StepperOptions& opt, Observer&& observer) {
  using namespace detail::dp;
  StepperStats st;
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  double t = t0;
  Eigen::VectorXd k1 = f(t, y);
  ++st.evaluations;
  const auto n = y.size();

  auto err_norm = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& e) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(a(i)), std::abs(b(i)));
      s += (e(i) / sc) * (e(i) / sc);
    }
    return std::sqrt(s / static_cast<double>(n));
  };

  double h;
  if (opt.fixed_step) {
    h = *opt.fixed_step;
  } else if (opt.h0 > 0) {
    h = opt.h0;
  } else {
    // Hairer's starting-step heuristic (first stage only).
    double d0 = 0, d1v = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d0 += (y(i) / sc) * (y(i) / sc);
      d1v += (k1(i) / sc) * (k1(i) / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1v = std::sqrt(d1v / n);
    h = (d0 < 1e-5 || d1v < 1e-5) ? 1e-6 : 0.01 * d0 / d1v;
    h = std::min(h, std::abs(t_end - t0));
  }
  h = std::abs(h);
  double err_old = 1e-4;
  bool last_rejected = false;

  while (dir * (t_end - t) > 0) {
    if (st.accepted + st.rejected >= opt.max_steps) throw StepSizeUnderflow("step budget exhausted at t = " + std::to_string(t));
    if (h < opt.min_step_rel * std::max(1.0, std::abs(t)))
      throw StepSizeUnderflow("step size " + std::to_string(h) + " underflows at t = " + std::to_string(t));
    // Absorb a remainder that is a rounding-level sliver of h.
    const double rem = std::abs(t_end - t);
    const bool final_step = h >= rem || rem - h < 1e-6 * h;
    const double hs = final_step ? rem : h;
    const double hd = dir * hs;

    Eigen::VectorXd k2, k3, k4, k5, k6, k7, y1;
    try {
      k2 = f(t + c2 * hd, y + hd * (a21 * k1));
      k3 = f(t + c3 * hd, y + hd * (a31 * k1 + a32 * k2));
      k4 = f(t + c4 * hd, y + hd * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = f(t + c5 * hd, y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = f(t + hd, y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y1 = y + hd * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = f(t + hd, y1);
      st.evaluations += 6;
    } catch (const SingularMetric&) {
      if (opt.fixed_step) throw;
      ++st.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    double err = 0.0;
    if (!opt.fixed_step) {
      const Eigen::VectorXd e = hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err = err_norm(y, y1, e);
      if (!std::isfinite(err)) err = 1e10;
      if (err > 1.0) {
        ++st.rejected;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        last_rejected = true;
        continue;
      }
    }

    DenseStep step;
    step.t = t;
    step.h = hd;
    step.y0 = y;
    step.y1 = y1;
    step.r2 = y1 - y;
    step.r3 = hd * k1 - step.r2;
    step.r4 = step.r2 - hd * k7 - step.r3;
    step.r5 = hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    ++st.accepted;
    t = final_step ? t_end : t + hd;
    y = y1;
    k1 = k7;
    st.t_last = t;
    if (!observer(step)) {
      st.stopped_by_observer = true;
      break;
    }
    if (!opt.fixed_step) {
      // PI controller (Gustafsson / Hairer's beta = 0.04).
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_old, 0.04);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      err_old = std::max(err, 1e-4);
      h = hs * fac;
      last_rejected = false;
    }
  }
  return st;
}

}  // namespace cohomsol
