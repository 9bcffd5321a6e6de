#pragma once

// Truncated Laurent series in t with validity tracking.
//
// A ScalarSeries holds the raw coefficients of t^lead, t^(lead+1), ..., t^order.
// Coefficients beyond `order` are unknown; arithmetic never claims more than the
// inputs justify.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"

namespace cohomsol {

class ScalarSeries {
 public:
  ScalarSeries() = default;
  ScalarSeries(int lead, std::vector<double> coeffs) : lead_(lead), coeffs_(std::move(coeffs)) {}

  static ScalarSeries constant(double c, int order) { return monomial(c, 0, order); }
  /// c t^power, valid through t^order.
  static ScalarSeries monomial(double c, int power, int order) {
    if (order < power) return ScalarSeries(power, {});
    std::vector<double> v(static_cast<std::size_t>(order - power + 1), 0.0);
    v[0] = c;
    return {power, std::move(v)};
  }
  /// Zero, valid from t^lead through t^order.
  static ScalarSeries zero(int lead, int order) {
    return {lead, std::vector<double>(static_cast<std::size_t>(std::max(0, order - lead + 1)), 0.0)};
  }

  int lead() const { return lead_; }
  int order() const { return lead_ + static_cast<int>(coeffs_.size()) - 1; }
  bool empty() const { return coeffs_.empty(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Coefficient of t^e (zero below the lead); throws past the validity order.
  double coeff(int e) const {
    if (e < lead_) return 0.0;
    if (e > order())
      throw SeriesOrderExceeded("coefficient t^" + std::to_string(e) + " requested, series valid through t^" +
                                std::to_string(order()));
    return coeffs_[static_cast<std::size_t>(e - lead_)];
  }
  void set_coeff(int e, double v) {
    if (e < lead_ || e > order()) throw SeriesOrderExceeded("set_coeff outside the stored range");
    coeffs_[static_cast<std::size_t>(e - lead_)] = v;
  }

  double eval(double t) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc * std::pow(t, lead_);
  }

  ScalarSeries derivative() const {
    if (empty()) return {lead_ - 1, {}};
    std::vector<double> v;
    int new_lead = lead_ - 1;
    if (lead_ == 0) {
      new_lead = 0;
      for (std::size_t j = 1; j < coeffs_.size(); ++j) v.push_back(static_cast<double>(j) * coeffs_[j]);
      if (v.empty()) return {0, {}};
      return {new_lead, std::move(v)};
    }
    for (std::size_t j = 0; j < coeffs_.size(); ++j) v.push_back((lead_ + static_cast<int>(j)) * coeffs_[j]);
    return {new_lead, std::move(v)};
  }

  /// Multiply by t^p.
  ScalarSeries shifted(int p) const { return {lead_ + p, coeffs_}; }

  /// Forget the coefficients below t^new_lead.
  ScalarSeries dropped_below(int new_lead) const {
    if (new_lead <= lead_) return *this;
    if (new_lead > order()) return {new_lead, {}};
    return {new_lead, std::vector<double>(coeffs_.begin() + (new_lead - lead_), coeffs_.end())};
  }

  ScalarSeries truncated(int new_order) const {
    if (new_order >= order()) return *this;
    std::vector<double> v(coeffs_.begin(), coeffs_.begin() + std::max(0, new_order - lead_ + 1));
    return {lead_, std::move(v)};
  }

  double max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  friend ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b) {
    const int lead = std::min(a.lead_, b.lead_);
    const int order = std::min(a.order(), b.order());
    std::vector<double> v(static_cast<std::size_t>(std::max(0, order - lead + 1)), 0.0);
    for (int e = lead; e <= order; ++e) v[static_cast<std::size_t>(e - lead)] = a.coeff(e) + b.coeff(e);
    return {lead, std::move(v)};
  }
  friend ScalarSeries operator-(const ScalarSeries& a) { return a * -1.0; }
  friend ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b) { return a + (-b); }
  friend ScalarSeries operator*(ScalarSeries a, double c) {
    for (auto& v : a.coeffs_) v *= c;
    return a;
  }
  friend ScalarSeries operator*(double c, ScalarSeries a) { return std::move(a) * c; }

  /// Cauchy product.
  friend ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b) {
    const int lead = a.lead_ + b.lead_;
    const int order = std::min(a.order() + b.lead_, b.order() + a.lead_);
    const int n = std::max(0, order - lead + 1);
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i <= j; ++i) {
        if (i >= static_cast<int>(a.coeffs_.size()) || j - i >= static_cast<int>(b.coeffs_.size())) continue;
        acc += a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j - i)];
      }
      v[static_cast<std::size_t>(j)] = acc;
    }
    return {lead, std::move(v)};
  }

 private:
  int lead_ = 0;
  std::vector<double> coeffs_;
};

inline double magnitude(const ScalarSeries& s) { return s.max_abs(); }

/// 1/s by the recursive formula; the leading stored coefficient must be nonzero.
inline ScalarSeries invert(const ScalarSeries& s) {
  if (s.empty() || s.coeffs()[0] == 0.0) throw ZeroLeadingCoefficient("cannot invert a series with zero leading coefficient");
  const auto a = s.coeffs();
  const std::size_t n = a.size();
  std::vector<double> b(n, 0.0);
  b[0] = 1.0 / a[0];
  for (std::size_t j = 1; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= j; ++i) acc += a[i] * b[j - i];
    b[j] = -acc * b[0];
  }
  return {-s.lead(), std::move(b)};
}

inline std::ostream& operator<<(std::ostream& os, const ScalarSeries& s) {
  os << "[";
  for (int e = s.lead(); e <= s.order(); ++e) os << (e == s.lead() ? "" : " + ") << s.coeff(e) << " t^" << e;
  return os << " + O(t^" << s.order() + 1 << ")]";
}

/// One ScalarSeries per summand.
class TensorSeries {
 public:
  TensorSeries() = default;
  TensorSeries(LayoutPtr layout, std::vector<ScalarSeries> comps)
      : layout_(std::move(layout)), comps_(std::move(comps)) {
    if (!layout_ || comps_.size() != layout_->size()) throw GeometryError("tensor series size mismatch");
  }

  static TensorSeries constant(const DiagonalTensor& c, int order) {
    std::vector<ScalarSeries> v;
    for (std::size_t i = 0; i < c.size(); ++i) v.push_back(ScalarSeries::constant(c[i], order));
    return {c.layout(), std::move(v)};
  }
  /// Raw coefficients: coeffs[j] multiplies t^j, valid through t^(coeffs.size()-1).
  static TensorSeries from_coefficients(LayoutPtr layout, const std::vector<DiagonalTensor>& coeffs) {
    std::vector<ScalarSeries> v;
    for (std::size_t i = 0; i < layout->size(); ++i) {
      std::vector<double> c;
      for (const auto& d : coeffs) c.push_back(d[i]);
      v.emplace_back(0, std::move(c));
    }
    return {std::move(layout), std::move(v)};
  }

  std::size_t size() const { return comps_.size(); }
  const ScalarSeries& operator[](std::size_t i) const { return comps_[i]; }
  ScalarSeries& operator[](std::size_t i) { return comps_[i]; }
  const LayoutPtr& layout() const { return layout_; }

  int lead() const {
    int l = std::numeric_limits<int>::max();
    for (const auto& c : comps_) l = std::min(l, c.lead());
    return l;
  }
  int order() const {
    int o = std::numeric_limits<int>::max();
    for (const auto& c : comps_) o = std::min(o, c.order());
    return o;
  }

  DiagonalTensor coeff(int e) const {
    std::vector<double> v;
    for (const auto& c : comps_) v.push_back(c.coeff(e));
    return {layout_, std::move(v)};
  }
  DiagonalTensor eval(double t) const {
    std::vector<double> v;
    for (const auto& c : comps_) v.push_back(c.eval(t));
    return {layout_, std::move(v)};
  }

  ScalarSeries trace() const {
    std::optional<ScalarSeries> acc;
    for (std::size_t i = 0; i < size(); ++i) {
      ScalarSeries term = comps_[i] * static_cast<double>(layout_->dims[i]);
      acc = acc ? *acc + term : term;
    }
    return *acc;
  }
  TensorSeries plus_part() const { return restricted(Block::Plus); }
  TensorSeries minus_part() const { return restricted(Block::Minus); }

  TensorSeries derivative() const { return map([](const ScalarSeries& s) { return s.derivative(); }); }
  TensorSeries shifted(int p) const { return map([p](const ScalarSeries& s) { return s.shifted(p); }); }
  TensorSeries truncated(int o) const { return map([o](const ScalarSeries& s) { return s.truncated(o); }); }
  TensorSeries inverse() const { return map([](const ScalarSeries& s) { return invert(s); }); }

  template <class F>
  TensorSeries map(F f) const {
    std::vector<ScalarSeries> v;
    for (const auto& c : comps_) v.push_back(f(c));
    return {layout_, std::move(v)};
  }

  friend TensorSeries operator+(const TensorSeries& a, const TensorSeries& b) { return zip(a, b, std::plus<>{}); }
  friend TensorSeries operator-(const TensorSeries& a, const TensorSeries& b) { return zip(a, b, std::minus<>{}); }
  friend TensorSeries operator*(const TensorSeries& a, const TensorSeries& b) { return zip(a, b, std::multiplies<>{}); }
  friend TensorSeries operator*(const TensorSeries& a, const ScalarSeries& s) {
    return a.map([&](const ScalarSeries& c) { return c * s; });
  }
  friend TensorSeries operator*(const ScalarSeries& s, const TensorSeries& a) { return a * s; }
  friend TensorSeries operator*(const TensorSeries& a, double c) {
    return a.map([c](const ScalarSeries& s) { return s * c; });
  }
  friend TensorSeries operator*(double c, const TensorSeries& a) { return a * c; }

 private:
  template <class Op>
  static TensorSeries zip(const TensorSeries& a, const TensorSeries& b, Op op) {
    if (a.size() != b.size()) throw GeometryError("tensor series size mismatch");
    std::vector<ScalarSeries> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(op(a.comps_[i], b.comps_[i]));
    return {a.layout_, std::move(v)};
  }
  TensorSeries restricted(Block b) const {
    TensorSeries r = *this;
    for (std::size_t i = 0; i < size(); ++i)
      if (layout_->blocks[i] != b) r.comps_[i] = r.comps_[i] * 0.0;
    return r;
  }

  LayoutPtr layout_;
  std::vector<ScalarSeries> comps_;
};

/// Parts of a Laurent series with lead >= -2: t^-2 coefficient, t^-1 coefficient, Taylor rest.
struct LaurentParts {
  DiagonalTensor singular2;  // coefficient of t^-2
  DiagonalTensor singular1;  // coefficient of t^-1
  TensorSeries regular;      // t^0 and above
};

inline LaurentParts laurent_split(const TensorSeries& s) {
  if (s.lead() < -2) throw LeadTooSingular("series lead t^" + std::to_string(s.lead()) + " is below t^-2");
  LaurentParts out{s.coeff(-2), s.coeff(-1), s};
  std::vector<ScalarSeries> reg;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& c = s[i];
    std::vector<double> v;
    for (int e = 0; e <= c.order(); ++e) v.push_back(c.coeff(e));
    reg.emplace_back(0, std::move(v));
  }
  out.regular = TensorSeries(s.layout(), std::move(reg));
  return out;
}

/// Series dump: CSV rows (summand_label, exponent, coefficient).
inline void write_series_csv(std::ostream& os, const TensorSeries& s, bool header = true) {
  if (header) os << "summand_label,exponent,coefficient\n";
  os.precision(17);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int e = s[i].lead(); e <= s[i].order(); ++e)
      os << s.layout()->labels[i] << ',' << e << ',' << s[i].coeff(e) << '\n';
}

/// Laurent expansion of the Ricci endomorphism of g_t = t^2 x_plus(t) + x_minus(t).
///
/// Requires x valid through t^(N+2) with x(0) invertible; the result is valid through
/// t^N and has lead >= -2.
inline TensorSeries ricci_series(const GeometrySpec& spec, const TensorSeries& x, int N) {
  if (x.order() < N + 2)
    throw SeriesOrderExceeded("ricci_series to order " + std::to_string(N) + " needs x through t^" +
                              std::to_string(N + 2));
  const TensorSeries xt = x.truncated(N + 2);
  std::vector<ScalarSeries> metric, inverse;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    if (xt[i].lead() != 0 || xt[i].coeff(0) == 0.0)
      throw SingularMetric("x(0) must be invertible on summand '" + spec.summand(i).label + "'");
    ScalarSeries g = spec.summand(i).block == Block::Plus ? xt[i].shifted(2) : xt[i];
    inverse.push_back(invert(g));
    metric.push_back(std::move(g));
  }
  const ScalarSeries one = ScalarSeries::constant(1.0, N + 6);
  auto r = ricci_diagonal<ScalarSeries>(spec, metric, inverse, one);
  TensorSeries out(spec.layout(), std::move(r));
  out = out.truncated(N);
  // Formal poles below t^-2 must cancel; drop them once checked.
  double scale = 1.0;
  for (std::size_t i = 0; i < out.size(); ++i) scale = std::max(scale, out[i].max_abs());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int e = out[i].lead(); e < -2; ++e)
      if (std::abs(out[i].coeff(e)) > 1e-10 * scale)
        throw LeadTooSingular("Ricci expansion has a pole of order > 2 on summand '" + spec.summand(i).label + "'");
    if (out[i].lead() < -2) out[i] = out[i].dropped_below(-2);
  }
  return out;
}

/// r_sing(x) for a constant x: the t^-2 coefficient of the Ricci endomorphism of t^2 x_+ + x_-.
inline DiagonalTensor singular_ricci(const GeometrySpec& spec, const DiagonalTensor& x) {
  return laurent_split(ricci_series(spec, TensorSeries::constant(x, 2), 0)).singular2;
}

}  // namespace cohomsol
