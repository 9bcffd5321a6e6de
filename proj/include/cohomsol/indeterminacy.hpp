#pragma once

// Order-by-order kernel dimensions of L_m: where the formal solution has free parameters.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohomsol/errors.hpp"
#include "cohomsol/geometry.hpp"
#include "cohomsol/singular_ivp.hpp"

namespace cohomsol {

struct OrderKernel {
  int m = 0;
  int plus_dim = 0;   // kernel directions with no Minus component
  int minus_dim = 0;  // the rest
  std::vector<std::string> triggering;  // summands carrying the kernel vectors, sorted
  int dim() const { return plus_dim + minus_dim; }
};

struct IndeterminacyReport {
  std::string geometry;
  int k = 0;
  int scan_limit = 0;
  std::vector<OrderKernel> per_order;  // m = 0..scan_limit
  int m0 = 0;  // even stabilization: W_{2m} = W_{2 m0} for m > m0
  int m1 = 0;  // odd stabilization:  W_{2m+1} = W_{2 m1 + 1} for m > m1
  bool stabilized = true;
  std::vector<double> casimir_eigenvalues;  // of the Casimir on diagonal Minus tensors
  std::string multiplicity_warning;         // nonempty when scalar coordinates may undercount

  int plus_total() const {
    int s = 0;
    for (const auto& o : per_order) s += o.plus_dim;
    return s;
  }
  int minus_total() const {
    int s = 0;
    for (const auto& o : per_order) s += o.minus_dim;
    return s;
  }
  const OrderKernel& at(int m) const { return per_order.at(static_cast<std::size_t>(m)); }
};

/// Order m at which a Casimir eigenvalue lambda produces a Minus kernel, i.e. the
/// nonnegative root of (m+1+k)(m+2) = lambda (may be fractional or negative).
inline double kernel_order_root(int k, double lambda) {
  const double b = k + 3.0, c = 2.0 * k + 2.0 - lambda;
  const double disc = b * b - 4.0 * c;
  if (disc < 0) return -1.0;
  return (-b + std::sqrt(disc)) / 2.0;
}

inline IndeterminacyReport kernel_scan(const GeometrySpec& spec, int M_max = 50) {
  IndeterminacyReport rep;
  rep.geometry = spec.name();
  rep.k = spec.k();
  rep.scan_limit = M_max;
  const int k = spec.k();
  const auto minus = spec.summands_in(Block::Minus);

  double max_root = 0.0;
  if (!minus.empty()) {
    const Eigen::MatrixXd C = casimir_tensor_operator(spec);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double lam = es.eigenvalues()(i).real();
      rep.casimir_eigenvalues.push_back(lam);
      max_root = std::max(max_root, kernel_order_root(k, lam));
    }
    std::sort(rep.casimir_eigenvalues.begin(), rep.casimir_eigenvalues.end());
    try {
      const auto lambda = casimir_spectrum(spec);
      for (std::size_t a = 0; a < minus.size(); ++a)
        for (std::size_t b = a + 1; b < minus.size(); ++b)
          if (spec.summand(minus[a]).dim == spec.summand(minus[b]).dim &&
              std::abs(lambda[a] - lambda[b]) <= 1e-9 * std::max(1.0, std::abs(lambda[a])))
            rep.multiplicity_warning = "summands '" + spec.summand(minus[a]).label + "' and '" +
                                       spec.summand(minus[b]).label +
                                       "' share dimension and Casimir eigenvalue; scalar coordinates may undercount";
    } catch (const NonScalarCasimir&) {
    }
  }

  int last_even = -1, last_odd = -1;
  for (int m = 0; m <= M_max; ++m) {
    OrderKernel ok;
    ok.m = m;
    const auto basis = kernel_basis(spec, m);
    if (!basis.empty()) {
      Eigen::MatrixXd K(static_cast<Eigen::Index>(spec.num_summands()), static_cast<Eigen::Index>(basis.size()));
      for (std::size_t c = 0; c < basis.size(); ++c) K.col(static_cast<Eigen::Index>(c)) = basis[c].to_eigen();
      Eigen::MatrixXd Km(static_cast<Eigen::Index>(minus.size()), K.cols());
      for (std::size_t a = 0; a < minus.size(); ++a) Km.row(static_cast<Eigen::Index>(a)) = K.row(minus[a]);
      int minus_rank = 0;
      if (Km.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Km);
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i)
          if (sv(i) > 1e-9 * std::max(1.0, sv(0))) ++minus_rank;
      }
      ok.minus_dim = minus_rank;
      ok.plus_dim = static_cast<int>(basis.size()) - minus_rank;
      // A vector with a Minus component is triggered there (its Plus part only compensates the trace).
      std::set<std::string> trig;
      for (const auto& v : basis) {
        const bool has_minus = v.minus_part().max_abs() > 1e-9;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (std::abs(v[i]) > 1e-9 && (!has_minus || spec.summand(i).block == Block::Minus))
            trig.insert(spec.summand(i).label);
      }
      ok.triggering.assign(trig.begin(), trig.end());

      if (ok.plus_dim > 0 && m != 0)
        throw ConsistencyViolated("collapsing-block kernel at order " + std::to_string(m) + " (only m = 0 is possible)");
      if (ok.minus_dim > 0) {
        const double target = (m + 1.0 + k) * (m + 2.0);
        const bool matched = std::any_of(rep.casimir_eigenvalues.begin(), rep.casimir_eigenvalues.end(),
                                         [&](double l) { return std::abs(l - target) <= 1e-9 * std::max(1.0, target); });
        if (!matched)
          throw ConsistencyViolated("kernel at order " + std::to_string(m) +
                                    " without a Casimir eigenvalue equal to (m+1+k)(m+2)");
        if (m > max_root + 1e-9)
          throw ConsistencyViolated("kernel at order " + std::to_string(m) + " beyond the last eigenvalue root");
        (m % 2 == 0 ? last_even : last_odd) = m;
      }
    }
    rep.per_order.push_back(std::move(ok));
  }
  rep.m0 = last_even >= 0 ? (last_even + 2) / 2 : 0;
  rep.m1 = last_odd >= 0 ? (last_odd + 1) / 2 : 0;
  rep.stabilized = rep.per_order.back().dim() == 0;
  return rep;
}

/// Total number of free scalar parameters in the formal solution.
inline int indeterminacy_total(const IndeterminacyReport& rep) {
  if (!rep.stabilized)
    throw StabilizationNotReached("kernel still present at the scan limit m = " + std::to_string(rep.scan_limit));
  return rep.plus_total() + rep.minus_total();
}

/// Table rows (m, plus_kernel_dim, minus_kernel_dim, triggering summands) for orders with a kernel,
/// followed by summary lines prefixed with '#'.
inline void write_indeterminacy_table(std::ostream& os, const IndeterminacyReport& rep) {
  os << "m,plus_kernel_dim,minus_kernel_dim,triggering_summands\n";
  for (const auto& o : rep.per_order) {
    if (o.dim() == 0) continue;
    os << o.m << ',' << o.plus_dim << ',' << o.minus_dim << ',';
    for (std::size_t i = 0; i < o.triggering.size(); ++i) os << (i ? ";" : "") << o.triggering[i];
    os << '\n';
  }
  os << "# geometry " << rep.geometry << ", scan limit " << rep.scan_limit << '\n';
  os << "# plus " << rep.plus_total() << ", minus " << rep.minus_total() << ", m0 " << rep.m0 << ", m1 " << rep.m1
     << ", stabilized " << (rep.stabilized ? "yes" : "no") << '\n';
  if (rep.stabilized) os << "# total " << indeterminacy_total(rep) << '\n';
  if (!rep.multiplicity_warning.empty()) os << "# warning: " << rep.multiplicity_warning << '\n';
}

}  // namespace cohomsol
