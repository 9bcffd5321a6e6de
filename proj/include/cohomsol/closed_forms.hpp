#pragma once

// Known exact solutions on the round-sphere skeletons, used as reference trajectories.
//   gaussian-flat(k): flat R^{k+1}, x = 1, u = -eps t^2 / 4
//   cigar:            f = tanh t, u = -2 log cosh t (steady, eps = 0)
//   sine-cone(n):     f = sin t, u = 0 (Einstein, eps = -2n)
// with x = (f / t)^2 on the collapsing sphere.

#include <cmath>
#include <optional>
#include <string>

#include "cohomsol/geometry.hpp"
#include "cohomsol/soliton_flow.hpp"

namespace cohomsol {

enum class ClosedFormKind { Gaussian, Cigar, SineCone };

struct ClosedForm {
  ClosedFormKind kind;
  LayoutPtr layout;
  double epsilon = 0.0;  // the soliton constant the closed form solves
  double u2 = 0.0;       // its u''(0)

  struct Point {
    SolitonState state;
    SolitonDerivative deriv;
  };

  Point at(double t) const {
    double f, f1, f2, ud, udd, uddd;
    switch (kind) {
      case ClosedFormKind::Gaussian:
        f = t, f1 = 1, f2 = 0;
        ud = -0.5 * epsilon * t, udd = -0.5 * epsilon, uddd = 0;
        break;
      case ClosedFormKind::Cigar: {
        const double th = std::tanh(t), s2 = 1.0 - th * th;
        f = th, f1 = s2, f2 = -2.0 * th * s2;
        ud = -2.0 * th, udd = -2.0 * s2, uddd = 4.0 * s2 * th;
        break;
      }
      case ClosedFormKind::SineCone:
      default:
        f = std::sin(t), f1 = std::cos(t), f2 = -std::sin(t);
        ud = udd = uddd = 0;
        break;
    }
    const double x = f * f / (t * t);
    const double xd = 2.0 * f * f1 / (t * t) - 2.0 * f * f / (t * t * t);
    const double xdd = 2.0 * (f1 * f1 + f * f2) / (t * t) - 8.0 * f * f1 / (t * t * t) + 6.0 * f * f / (t * t * t * t);
    const auto one = [&](double v) { return DiagonalTensor(layout, std::vector<double>(layout->size(), v)); };
    Point p;
    p.state = {t, one(x), one(0.5 * xd), ud, udd};
    p.deriv = {one(xd), one(0.5 * xdd), udd, uddd};
    return p;
  }
};

/// The closed form attached to a builtin skeleton, if any. The soliton constant is the one
/// the closed form solves (for the sine cone it is fixed by n; for the Gaussian it is taken
/// from `epsilon`).
inline std::optional<ClosedForm> closed_form_for(const GeometrySpec& spec, double epsilon) {
  const std::string& name = spec.name();
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (name == "cigar") return ClosedForm{ClosedFormKind::Cigar, spec.layout(), 0.0, -2.0};
  if (starts("sine-cone(")) return ClosedForm{ClosedFormKind::SineCone, spec.layout(), -2.0 * spec.k(), 0.0};
  if (starts("gaussian-flat(")) return ClosedForm{ClosedFormKind::Gaussian, spec.layout(), epsilon, -0.5 * epsilon};
  return std::nullopt;
}

}  // namespace cohomsol
