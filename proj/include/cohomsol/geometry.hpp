#pragma once

// Infinitesimal data of a cohomogeneity-one action (g = k + p_plus + p_minus) and
// curvature of diagonal invariant metrics on the principal orbit G/K.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cohomsol/errors.hpp"

namespace cohomsol {

enum class Block { Plus, Minus };

inline const char* to_string(Block b) { return b == Block::Plus ? "plus" : "minus"; }

struct SummandSpec {
  std::string label;
  int dim = 1;
  Block block = Block::Plus;
  /// Casimir eigenvalue on this summand (Minus only). Absent means "derive from brackets".
  std::optional<double> casimir_eigenvalue;
};

/// Shared, immutable description of the summand coordinates of a DiagonalTensor.
struct SummandLayout {
  std::vector<std::string> labels;
  std::vector<int> dims;
  std::vector<Block> blocks;

  std::size_t size() const { return dims.size(); }
  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    return -1;
  }
};

using LayoutPtr = std::shared_ptr<const SummandLayout>;

/// A K-invariant symmetric endomorphism of p, one scalar per irreducible summand.
class DiagonalTensor {
 public:
  DiagonalTensor() = default;
  DiagonalTensor(LayoutPtr layout, std::vector<double> values)
      : layout_(std::move(layout)), values_(std::move(values)) {
    if (!layout_ || values_.size() != layout_->size())
      throw GeometryError("diagonal tensor size does not match summand layout");
  }

  static DiagonalTensor zero(LayoutPtr layout) {
    std::vector<double> v(layout->size(), 0.0);
    return {std::move(layout), std::move(v)};
  }
  static DiagonalTensor identity(LayoutPtr layout) {
    std::vector<double> v(layout->size(), 1.0);
    return {std::move(layout), std::move(v)};
  }
  /// The projector onto p_plus.
  static DiagonalTensor plus_identity(LayoutPtr layout) {
    std::vector<double> v(layout->size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (layout->blocks[i] == Block::Plus) v[i] = 1.0;
    return {std::move(layout), std::move(v)};
  }
  static DiagonalTensor unit(LayoutPtr layout, std::size_t i) {
    auto t = zero(std::move(layout));
    t.values_.at(i) = 1.0;
    return t;
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const LayoutPtr& layout() const { return layout_; }

  /// tr(xi) = sum_i d_i xi_i.
  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += layout_->dims[i] * values_[i];
    return s;
  }
  DiagonalTensor plus_part() const { return restricted(Block::Plus); }
  DiagonalTensor minus_part() const { return restricted(Block::Minus); }

  DiagonalTensor inverse() const {
    DiagonalTensor r = *this;
    for (auto& v : r.values_) {
      if (v == 0.0) throw SingularMetric("cannot invert a diagonal tensor with a zero entry");
      v = 1.0 / v;
    }
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  /// Norm induced by the trace inner product <a, b> = tr(ab).
  double trace_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += layout_->dims[i] * values_[i] * values_[i];
    return std::sqrt(s);
  }

  Eigen::VectorXd to_eigen() const {
    return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(size()));
  }
  static DiagonalTensor from_eigen(LayoutPtr layout, const Eigen::VectorXd& v) {
    return {std::move(layout), std::vector<double>(v.data(), v.data() + v.size())};
  }

  DiagonalTensor& operator+=(const DiagonalTensor& o) { return zip(o, [](double a, double b) { return a + b; }); }
  DiagonalTensor& operator-=(const DiagonalTensor& o) { return zip(o, [](double a, double b) { return a - b; }); }
  DiagonalTensor& operator*=(const DiagonalTensor& o) { return zip(o, [](double a, double b) { return a * b; }); }
  DiagonalTensor& operator*=(double c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  friend DiagonalTensor operator+(DiagonalTensor a, const DiagonalTensor& b) { return a += b; }
  friend DiagonalTensor operator-(DiagonalTensor a, const DiagonalTensor& b) { return a -= b; }
  friend DiagonalTensor operator*(DiagonalTensor a, const DiagonalTensor& b) { return a *= b; }
  friend DiagonalTensor operator*(DiagonalTensor a, double c) { return a *= c; }
  friend DiagonalTensor operator*(double c, DiagonalTensor a) { return a *= c; }
  friend DiagonalTensor operator-(DiagonalTensor a) { return a *= -1.0; }

 private:
  template <class F>
  DiagonalTensor& zip(const DiagonalTensor& o, F f) {
    if (o.size() != size()) throw GeometryError("diagonal tensor size mismatch");
    for (std::size_t i = 0; i < size(); ++i) values_[i] = f(values_[i], o.values_[i]);
    return *this;
  }
  DiagonalTensor restricted(Block b) const {
    DiagonalTensor r = *this;
    for (std::size_t i = 0; i < size(); ++i)
      if (layout_->blocks[i] != b) r.values_[i] = 0.0;
    return r;
  }

  LayoutPtr layout_;
  std::vector<double> values_;
};

/// One structure constant: [X_a, X_b] has coefficient `value` on X_c.
struct BracketEntry {
  int a = 0;
  int b = 0;
  int c = 0;
  double value = 0.0;
};

namespace detail {

// Metric-independent weights of the homogeneous Ricci formula for one pair (a, b)
// of p-basis indices, grouped by summand so the metric enters only per summand.
struct RicciPairWeights {
  int a = 0;
  int b = 0;
  double killing = 0.0;     // tr_g(ad X_a ad X_b)
  std::vector<double> w2;   // [si * s + sd] : sum c_{a i}^d c_{b i}^d
  std::vector<double> w3;   // [si * s + sp] : sum c_{i p}^a c_{i p}^b
};

}  // namespace detail

/// Numeric skeleton of (G, H, K). The adapted basis is
/// {basis of k} u {summand 0} u {summand 1} ..., each summand a contiguous block,
/// orthonormal for the background metric on p.
class GeometrySpec {
 public:
  GeometrySpec(std::string name, int k, int isotropy_dim, std::vector<SummandSpec> summands,
               std::optional<std::vector<BracketEntry>> brackets)
      : name_(std::move(name)), k_(k), isotropy_dim_(isotropy_dim), summands_(std::move(summands)) {
    if (k_ < 1) throw GeometryError("sphere dimension k must be >= 1");
    if (isotropy_dim_ < 0) throw GeometryError("isotropy dimension must be >= 0");
    if (summands_.empty()) throw GeometryError("at least one summand is required");
    auto layout = std::make_shared<SummandLayout>();
    int plus_dim = 0;
    int offset = isotropy_dim_;
    for (const auto& s : summands_) {
      if (s.dim < 1) throw GeometryError("summand '" + s.label + "' has dimension < 1");
      if (layout->index_of(s.label) >= 0) throw GeometryError("duplicate summand label '" + s.label + "'");
      if (s.casimir_eigenvalue && *s.casimir_eigenvalue < 0.0)
        throw GeometryError("summand '" + s.label + "' has a negative Casimir eigenvalue");
      layout->labels.push_back(s.label);
      layout->dims.push_back(s.dim);
      layout->blocks.push_back(s.block);
      if (s.block == Block::Plus) plus_dim += s.dim;
      begin_.push_back(offset);
      offset += s.dim;
    }
    if (plus_dim != k_)
      throw GeometryError("plus summand dimensions sum to " + std::to_string(plus_dim) + " but k = " +
                          std::to_string(k_));
    basis_dim_ = offset;
    layout_ = std::move(layout);
    summand_of_.assign(basis_dim_, -1);
    for (std::size_t s = 0; s < summands_.size(); ++s)
      for (int j = 0; j < summands_[s].dim; ++j) summand_of_[begin_[s] + j] = static_cast<int>(s);

    if (brackets) {
      has_brackets_ = true;
      const auto n = static_cast<std::size_t>(basis_dim_);
      c_.assign(n * n * n, 0.0);
      std::vector<char> given(n * n * n, 0);
      for (const auto& e : *brackets) {
        if (e.a < 0 || e.b < 0 || e.c < 0 || e.a >= basis_dim_ || e.b >= basis_dim_ || e.c >= basis_dim_) {
          std::ostringstream os;
          os << "bracket index out of range: (" << e.a << ", " << e.b << ", " << e.c << ") with basis_dim "
             << basis_dim_;
          throw GeometryError(os.str());
        }
        c_[idx(e.a, e.b, e.c)] = e.value;
        given[idx(e.a, e.b, e.c)] = 1;
      }
      // Entries listed only as (a, b) get their antisymmetric partner filled in.
      for (const auto& e : *brackets)
        if (!given[idx(e.b, e.a, e.c)]) c_[idx(e.b, e.a, e.c)] = -e.value;
      build_ricci_tables();
    }
  }

  const std::string& name() const { return name_; }
  int k() const { return k_; }
  int isotropy_dim() const { return isotropy_dim_; }
  int basis_dim() const { return basis_dim_; }
  int p_dim() const { return basis_dim_ - isotropy_dim_; }
  std::size_t num_summands() const { return summands_.size(); }
  const std::vector<SummandSpec>& summands() const { return summands_; }
  const SummandSpec& summand(std::size_t s) const { return summands_.at(s); }
  const LayoutPtr& layout() const { return layout_; }
  bool has_brackets() const { return has_brackets_; }

  /// Summand index of a basis element, or -1 for the isotropy algebra k.
  int summand_of(int basis_index) const { return summand_of_.at(basis_index); }
  int summand_begin(std::size_t s) const { return begin_.at(s); }
  bool in_block(int basis_index, Block b) const {
    const int s = summand_of(basis_index);
    return s >= 0 && summands_[s].block == b;
  }

  double bracket(int a, int b, int c) const { return has_brackets_ ? c_[idx(a, b, c)] : 0.0; }

  std::vector<int> summands_in(Block b) const {
    std::vector<int> out;
    for (std::size_t s = 0; s < summands_.size(); ++s)
      if (summands_[s].block == b) out.push_back(static_cast<int>(s));
    return out;
  }
  std::vector<int> basis_in(Block b) const {
    std::vector<int> out;
    for (int a = isotropy_dim_; a < basis_dim_; ++a)
      if (in_block(a, b)) out.push_back(a);
    return out;
  }

  /// Same geometry with the given Casimir eigenvalues recorded on the summands.
  GeometrySpec with_casimir(const std::vector<std::optional<double>>& values) const {
    if (values.size() != summands_.size()) throw GeometryError("casimir vector size mismatch");
    GeometrySpec out = *this;
    for (std::size_t s = 0; s < values.size(); ++s)
      if (values[s]) out.summands_[s].casimir_eigenvalue = values[s];
    return out;
  }

  const std::vector<detail::RicciPairWeights>& ricci_tables() const { return ricci_tables_; }

 private:
  std::size_t idx(int a, int b, int c) const {
    const auto n = static_cast<std::size_t>(basis_dim_);
    return (static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n + static_cast<std::size_t>(c);
  }

  void build_ricci_tables() {
    const int n = basis_dim_;
    const std::size_t s = summands_.size();
    for (int a = isotropy_dim_; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        detail::RicciPairWeights w;
        w.a = a;
        w.b = b;
        w.w2.assign(s * s, 0.0);
        w.w3.assign(s * s, 0.0);
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) w.killing += c_[idx(a, c, d)] * c_[idx(b, d, c)];
        for (int i = isotropy_dim_; i < n; ++i)
          for (int d = isotropy_dim_; d < n; ++d)
            w.w2[summand_of_[i] * s + summand_of_[d]] += c_[idx(a, i, d)] * c_[idx(b, i, d)];
        for (int i = isotropy_dim_; i < n; ++i)
          for (int p = isotropy_dim_; p < n; ++p)
            w.w3[summand_of_[i] * s + summand_of_[p]] += c_[idx(i, p, a)] * c_[idx(i, p, b)];
        ricci_tables_.push_back(std::move(w));
      }
    }
  }

  std::string name_;
  int k_ = 1;
  int isotropy_dim_ = 0;
  int basis_dim_ = 0;
  std::vector<SummandSpec> summands_;
  LayoutPtr layout_;
  std::vector<int> begin_;
  std::vector<int> summand_of_;
  bool has_brackets_ = false;
  std::vector<double> c_;
  std::vector<detail::RicciPairWeights> ricci_tables_;
};

inline double magnitude(double v) { return std::abs(v); }

/// Ricci endomorphism of a diagonal metric, generic over the scalar type.
///
/// `metric[s]` and `inverse[s]` are the metric scalar on summand s and its reciprocal;
/// `one` is the multiplicative unit of T. Uses
///   Ric(X,Y) = -1/2 tr_g(ad X ad Y) - 1/2 sum g([X,X_i]_p,[Y,X_j]_p) g^ij
///              + 1/4 sum g(X,[X_i,X_p]) g(Y,[X_j,X_q]) g^ij g^pq
/// and returns r with Ric(X, Y) = g(r X, Y). Throws NonDiagonalRicci when the
/// result is not diagonal on the declared summands.
template <class T>
std::vector<T> ricci_diagonal(const GeometrySpec& spec, std::span<const T> metric, std::span<const T> inverse,
                              const T& one, double tol = 1e-10) {
  if (!spec.has_brackets()) throw GeometryError("geometry '" + spec.name() + "' has no bracket tensor");
  const std::size_t s = spec.num_summands();
  if (metric.size() != s || inverse.size() != s) throw GeometryError("metric size mismatch");

  auto weight_active = [](double w) { return std::abs(w) > 1e-14; };
  std::vector<std::optional<T>> g_over(s * s), inv_pair(s * s);
  auto g_over_at = [&](std::size_t si, std::size_t sd) -> const T& {
    auto& slot = g_over[si * s + sd];
    if (!slot) slot = metric[sd] * inverse[si];
    return *slot;
  };
  auto inv_pair_at = [&](std::size_t si, std::size_t sp) -> const T& {
    auto& slot = inv_pair[si * s + sp];
    if (!slot) slot = inverse[si] * inverse[sp];
    return *slot;
  };

  std::vector<std::optional<T>> r(s);
  double scale = 1.0;
  double offdiag = 0.0;
  double spread = 0.0;
  std::vector<std::pair<std::pair<int, int>, double>> off_entries;

  for (const auto& w : spec.ricci_tables()) {
    T ric = one * (-0.5 * w.killing);
    for (std::size_t si = 0; si < s; ++si)
      for (std::size_t sd = 0; sd < s; ++sd)
        if (weight_active(w.w2[si * s + sd])) ric = ric + g_over_at(si, sd) * (-0.5 * w.w2[si * s + sd]);
    std::optional<T> quartic;
    for (std::size_t si = 0; si < s; ++si)
      for (std::size_t sp = 0; sp < s; ++sp)
        if (weight_active(w.w3[si * s + sp])) {
          T term = inv_pair_at(si, sp) * (0.25 * w.w3[si * s + sp]);
          quartic = quartic ? *quartic + term : term;
        }
    const auto sa = static_cast<std::size_t>(spec.summand_of(w.a));
    const auto sb = static_cast<std::size_t>(spec.summand_of(w.b));
    if (quartic) ric = ric + metric[sa] * metric[sb] * *quartic;

    if (w.a == w.b) {
      T ra = ric * inverse[sa];
      scale = std::max(scale, magnitude(ric));
      if (!r[sa]) {
        r[sa] = ra;
      } else {
        spread = std::max(spread, magnitude(ra - *r[sa]) / std::max(1.0, magnitude(*r[sa])));
      }
    } else {
      off_entries.push_back({{w.a, w.b}, magnitude(ric)});
    }
  }
  for (const auto& e : off_entries) offdiag = std::max(offdiag, e.second);
  offdiag /= scale;
  if (offdiag > tol || spread > tol) {
    std::ostringstream os;
    os << "geometry '" << spec.name() << "': off-diagonal Ricci deviation " << offdiag
       << ", within-summand spread " << spread << " (tolerance " << tol << ")";
    throw NonDiagonalRicci(os.str());
  }
  std::vector<T> out;
  out.reserve(s);
  for (auto& v : r) out.push_back(std::move(*v));
  return out;
}

/// Ricci endomorphism r of the diagonal metric with the given per-summand scalars.
inline DiagonalTensor ricci_endomorphism(const GeometrySpec& spec, const DiagonalTensor& metric) {
  for (std::size_t i = 0; i < metric.size(); ++i)
    if (!(metric[i] > 0.0) || !std::isfinite(metric[i]))
      throw SingularMetric("metric scalar on summand '" + spec.summand(i).label + "' is not positive");
  const auto inv = metric.inverse();
  auto r = ricci_diagonal<double>(spec, metric.values(), inv.values(), 1.0);
  return {spec.layout(), std::move(r)};
}

// ---------------------------------------------------------------------------
// Validation

struct CheckResult {
  std::string name;
  bool passed = true;
  double max_deviation = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline ValidationReport validate_geometry(const GeometrySpec& spec, std::uint64_t seed = 7) {
  ValidationReport report;
  if (!spec.has_brackets()) {
    bool ok = true;
    for (const auto& s : spec.summands())
      if (s.block == Block::Minus && !s.casimir_eigenvalue) ok = false;
    report.checks.push_back({"casimir_data", ok, 0.0,
                             ok ? "summand table only; Casimir eigenvalues supplied"
                                : "summand table only and a Minus summand lacks a Casimir eigenvalue"});
    return report;
  }
  const int n = spec.basis_dim();
  const int k0 = spec.isotropy_dim();
  auto region = [&](int a) { return a < k0 ? -1 : (spec.in_block(a, Block::Plus) ? 0 : 1); };

  double anti = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) anti = std::max(anti, std::abs(spec.bracket(a, b, c) + spec.bracket(b, a, c)));
  report.checks.push_back({"antisymmetry", anti <= 1e-12, anti, ""});

  double jac = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double sum = 0.0;
          for (int d = 0; d < n; ++d)
            sum += spec.bracket(a, b, d) * spec.bracket(d, c, e) + spec.bracket(b, c, d) * spec.bracket(d, a, e) +
                   spec.bracket(c, a, d) * spec.bracket(d, b, e);
          jac = std::max(jac, std::abs(sum));
        }
  report.checks.push_back({"jacobi", jac <= 1e-12, jac, ""});

  // Orthonormal-basis bookkeeping: k is a subalgebra, [k, p] in p, h = k + p_plus is a
  // subalgebra and [h, p_minus] in p_minus.
  double leak = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double v = std::abs(spec.bracket(a, b, c));
        if (v == 0.0) continue;
        const int ra = region(a), rb = region(b), rc = region(c);
        bool bad = false;
        if (ra == -1 && rb == -1 && rc != -1) bad = true;
        if (ra == -1 && rb != -1 && rc == -1) bad = true;
        if (ra <= 0 && rb <= 0 && rc == 1) bad = true;
        if (ra <= 0 && rb == 1 && rc != 1) bad = true;
        if (bad) leak = std::max(leak, v);
      }
  report.checks.push_back({"reductive_splitting", leak <= 1e-12, leak, "k, h subalgebras; [h, p_minus] in p_minus"});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  std::vector<double> g(spec.num_summands());
  for (auto& v : g) v = dist(rng);
  CheckResult diag{"diagonal_ricci", true, 0.0, ""};
  try {
    ricci_endomorphism(spec, DiagonalTensor(spec.layout(), g));
  } catch (const NonDiagonalRicci& e) {
    diag.passed = false;
    diag.detail = e.what();
  }
  report.checks.push_back(diag);
  return report;
}

// ---------------------------------------------------------------------------
// Casimir operators C = -sum_alpha ad(U_alpha)^2 over an orthonormal basis of p_plus.

/// Matrices of ad(U_alpha) restricted to p_minus, in p_minus basis order.
inline std::vector<Eigen::MatrixXd> ad_plus_on_minus(const GeometrySpec& spec) {
  const auto minus = spec.basis_in(Block::Minus);
  const auto plus = spec.basis_in(Block::Plus);
  const auto m = static_cast<Eigen::Index>(minus.size());
  std::vector<Eigen::MatrixXd> out;
  for (int u : plus) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index e = 0; e < m; ++e)
      for (Eigen::Index d = 0; d < m; ++d) A(d, e) = spec.bracket(u, minus[e], minus[d]);
    out.push_back(std::move(A));
  }
  return out;
}

/// The raw Casimir matrix on p_minus (vector action).
inline Eigen::MatrixXd casimir_matrix(const GeometrySpec& spec) {
  if (!spec.has_brackets()) throw GeometryError("casimir_matrix needs the bracket tensor");
  const auto m = static_cast<Eigen::Index>(spec.basis_in(Block::Minus).size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
  for (const auto& A : ad_plus_on_minus(spec)) C -= A * A;
  return C;
}

/// Casimir scalar per Minus summand (vector action), in the order of summands_in(Minus).
/// Uses supplied eigenvalues where present, otherwise derives them from the brackets.
inline std::vector<double> casimir_spectrum(const GeometrySpec& spec) {
  const auto minus_summands = spec.summands_in(Block::Minus);
  std::vector<double> out;
  if (minus_summands.empty()) return out;
  const bool all_given = std::all_of(minus_summands.begin(), minus_summands.end(),
                                     [&](int s) { return spec.summand(s).casimir_eigenvalue.has_value(); });
  if (!spec.has_brackets()) {
    if (!all_given) throw GeometryError("Casimir eigenvalue missing and no bracket tensor to derive it");
    for (int s : minus_summands) out.push_back(*spec.summand(s).casimir_eigenvalue);
    return out;
  }
  const Eigen::MatrixXd C = casimir_matrix(spec);
  const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  Eigen::Index offset = 0;
  for (int s : minus_summands) {
    const Eigen::Index d = spec.summand(s).dim;
    const double lambda = C(offset, offset);
    double dev = 0.0;
    for (Eigen::Index i = 0; i < C.rows(); ++i)
      for (Eigen::Index j = offset; j < offset + d; ++j) {
        const double expect = (i == j) ? lambda : 0.0;
        dev = std::max(dev, std::abs(C(i, j) - expect));
      }
    if (dev > 1e-10 * scale)
      throw NonScalarCasimir("summand '" + spec.summand(s).label + "' deviation " + std::to_string(dev));
    out.push_back(spec.summand(s).casimir_eigenvalue.value_or(lambda));
    offset += d;
  }
  return out;
}

/// Copy of `spec` with every absent Minus Casimir eigenvalue filled in.
inline GeometrySpec with_casimir_spectrum(const GeometrySpec& spec) {
  const auto minus = spec.summands_in(Block::Minus);
  const auto values = casimir_spectrum(spec);
  std::vector<std::optional<double>> filled(spec.num_summands());
  for (std::size_t i = 0; i < minus.size(); ++i)
    if (!spec.summand(minus[i]).casimir_eigenvalue) filled[minus[i]] = values[i];
  return spec.with_casimir(filled);
}

/// The Casimir acting on diagonal tensors of p_minus, xi -> -sum [ad U, [ad U, xi]],
/// as a matrix on Minus summand coordinates (order of summands_in(Minus)).
/// Without brackets, the supplied per-summand eigenvalues are taken as its diagonal.
inline Eigen::MatrixXd casimir_tensor_operator(const GeometrySpec& spec) {
  const auto minus_summands = spec.summands_in(Block::Minus);
  const auto ms = static_cast<Eigen::Index>(minus_summands.size());
  if (!spec.has_brackets()) {
    const auto lambda = casimir_spectrum(spec);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(ms, ms);
    for (Eigen::Index i = 0; i < ms; ++i) D(i, i) = lambda[i];
    return D;
  }
  const auto ads = ad_plus_on_minus(spec);
  const auto m = static_cast<Eigen::Index>(spec.basis_in(Block::Minus).size());
  std::vector<Eigen::Index> begin;
  Eigen::Index off = 0;
  for (int s : minus_summands) {
    begin.push_back(off);
    off += spec.summand(s).dim;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ms, ms);
  for (Eigen::Index t = 0; t < ms; ++t) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    const Eigen::Index dt = spec.summand(minus_summands[t]).dim;
    for (Eigen::Index j = 0; j < dt; ++j) P(begin[t] + j, begin[t] + j) = 1.0;
    Eigen::MatrixXd CP = Eigen::MatrixXd::Zero(m, m);
    for (const auto& A : ads) CP -= A * A * P + P * A * A - 2.0 * A * P * A;
    const double scale = std::max(1.0, CP.cwiseAbs().maxCoeff());
    double dev = 0.0;
    for (Eigen::Index si = 0; si < ms; ++si) {
      const Eigen::Index ds = spec.summand(minus_summands[si]).dim;
      const double v = CP(begin[si], begin[si]);
      out(si, t) = v;
      for (Eigen::Index j = 0; j < ds; ++j) dev = std::max(dev, std::abs(CP(begin[si] + j, begin[si] + j) - v));
    }
    const Eigen::MatrixXd off_diag = CP - Eigen::MatrixXd(CP.diagonal().asDiagonal());
    dev = std::max(dev, off_diag.cwiseAbs().maxCoeff());
    if (dev > 1e-10 * scale)
      throw NonScalarCasimir("Casimir image of summand '" + spec.summand(minus_summands[t]).label +
                             "' is not diagonal on the declared summands (deviation " + std::to_string(dev) + ")");
  }
  return out;
}

}  // namespace cohomsol
