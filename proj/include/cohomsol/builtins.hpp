#pragma once

// Builtin skeletons. All of them are homogeneous spaces of SO(N) (or SU(2)) with the
// basis E_ij = e_i e_j^T - e_j e_i^T, orthonormal for -1/2 tr(XY); with that
// normalization the collapsing sphere H/K is the unit round sphere.

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "cohomsol/geometry.hpp"

namespace cohomsol {

namespace detail {

using IndexPair = std::pair<int, int>;  // (i, j) with i < j, 1-based

/// Structure constants of so(N) in the ordered basis {E_p : p in basis}.
inline std::vector<BracketEntry> so_brackets(const std::vector<IndexPair>& basis) {
  std::map<IndexPair, int> where;
  for (std::size_t q = 0; q < basis.size(); ++q) where[basis[q]] = static_cast<int>(q);
  // E_ij as (sign, position) of the normalized pair.
  auto lookup = [&](int i, int j) -> std::optional<std::pair<double, int>> {
    if (i == j) return std::nullopt;
    const double sign = i < j ? 1.0 : -1.0;
    auto it = where.find({std::min(i, j), std::max(i, j)});
    if (it == where.end()) throw GeometryError("so(N) basis is incomplete");
    return std::make_pair(sign, it->second);
  };
  std::vector<BracketEntry> out;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto [i, j] = basis[a];
      const auto [k, l] = basis[b];
      // [E_ij, E_kl] = d_jk E_il - d_ik E_jl - d_jl E_ik + d_il E_jk
      std::map<int, double> acc;
      auto add = [&](double coeff, int p, int q) {
        if (auto e = lookup(p, q)) acc[e->second] += coeff * e->first;
      };
      if (j == k) add(1.0, i, l);
      if (i == k) add(-1.0, j, l);
      if (j == l) add(-1.0, i, k);
      if (i == l) add(1.0, j, k);
      for (const auto& [c, v] : acc)
        if (v != 0.0) out.push_back({static_cast<int>(a), static_cast<int>(b), c, v});
    }
  return out;
}

inline void append_pairs(std::vector<IndexPair>& basis, const std::vector<IndexPair>& more) {
  basis.insert(basis.end(), more.begin(), more.end());
}

/// so(m) on the index range [lo, lo + m).
inline std::vector<IndexPair> so_block(int lo, int m) {
  std::vector<IndexPair> out;
  for (int i = lo; i < lo + m; ++i)
    for (int j = i + 1; j < lo + m; ++j) out.push_back({i, j});
  return out;
}

inline std::vector<IndexPair> column(int lo, int count, int j) {
  std::vector<IndexPair> out;
  for (int i = lo; i < lo + count; ++i) out.push_back({i, j});
  return out;
}

}  // namespace detail

/// SO(k+1) acting on R^{k+1}: the singular orbit is a point and the principal
/// orbits are round spheres S^k. Skeleton of the Gaussian, Bryant and sine-cone examples.
inline GeometrySpec round_sphere_geometry(int k, const std::string& name) {
  if (k < 1) throw GeometryError("sphere dimension must be >= 1");
  using namespace detail;
  std::vector<IndexPair> basis = so_block(1, k);
  const int iso = static_cast<int>(basis.size());
  append_pairs(basis, column(1, k, k + 1));
  return GeometrySpec(name, k, iso, {{"sphere", k, Block::Plus, std::nullopt}}, so_brackets(basis));
}

inline GeometrySpec gaussian_flat(int k) { return round_sphere_geometry(k, "gaussian-flat(" + std::to_string(k) + ")"); }
inline GeometrySpec bryant_sphere(int n) { return round_sphere_geometry(n, "bryant-sphere(" + std::to_string(n) + ")"); }
inline GeometrySpec sine_cone(int n) { return round_sphere_geometry(n, "sine-cone(" + std::to_string(n) + ")"); }
inline GeometrySpec cigar() { return round_sphere_geometry(1, "cigar"); }

/// G = SO(n+2), H = SO(n+1), K = SO(n): Stiefel principal orbits over the singular orbit S^{n+1}.
/// p_plus = p1 = span E_{i,n+1}; p_minus = p2 + p3 with p2 = span E_{i,n+2}, p3 = E_{n+1,n+2}.
inline GeometrySpec stiefel(int n) {
  if (n < 2) throw GeometryError("stiefel skeleton needs n >= 2");
  using namespace detail;
  std::vector<IndexPair> basis = so_block(1, n);
  const int iso = static_cast<int>(basis.size());
  append_pairs(basis, column(1, n, n + 1));
  append_pairs(basis, column(1, n, n + 2));
  basis.push_back({n + 1, n + 2});
  return GeometrySpec("stiefel-so(" + std::to_string(n + 2) + ")", n, iso,
                      {{"p1", n, Block::Plus, std::nullopt},
                       {"p2", n, Block::Minus, std::nullopt},
                       {"p3", 1, Block::Minus, std::nullopt}},
                      so_brackets(basis));
}

/// G = SO(n+2), H = SO(2) x SO(n), K = SO(n): codimension-2 singular orbit.
/// p_plus = E_{n+1,n+2}; p_minus = q1 + q2 with q1 = span E_{i,n+1}, q2 = span E_{i,n+2}.
inline GeometrySpec stiefel_codim2(int n) {
  if (n < 2) throw GeometryError("codimension-2 stiefel skeleton needs n >= 2");
  using namespace detail;
  std::vector<IndexPair> basis = so_block(1, n);
  const int iso = static_cast<int>(basis.size());
  basis.push_back({n + 1, n + 2});
  append_pairs(basis, column(1, n, n + 1));
  append_pairs(basis, column(1, n, n + 2));
  return GeometrySpec("stiefel-codim2-so(" + std::to_string(n + 2) + ")", 1, iso,
                      {{"circle", 1, Block::Plus, std::nullopt},
                       {"q1", n, Block::Minus, std::nullopt},
                       {"q2", n, Block::Minus, std::nullopt}},
                      so_brackets(basis));
}

/// G = SO(p+n), H = SO(p) x SO(n), K = SO(p) x SO(n-1), normal space V = R^n.
/// p_plus = span E_{p+j,p+n}; p_minus = r1 + r2 with r1 = span E_{i,p+j} (j < n), r2 = span E_{i,p+n}.
inline GeometrySpec grassmann(int p, int n) {
  if (p < 1 || n < 2) throw GeometryError("grassmann skeleton needs p >= 1, n >= 2");
  using namespace detail;
  std::vector<IndexPair> basis = so_block(1, p);
  append_pairs(basis, so_block(p + 1, n - 1));
  const int iso = static_cast<int>(basis.size());
  append_pairs(basis, column(p + 1, n - 1, p + n));
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j < n; ++j) basis.push_back({i, p + j});
  append_pairs(basis, column(1, p, p + n));
  return GeometrySpec("grassmann-so(" + std::to_string(p) + "+" + std::to_string(n) + ")", n - 1, iso,
                      {{"sphere", n - 1, Block::Plus, std::nullopt},
                       {"r1", p * (n - 1), Block::Minus, std::nullopt},
                       {"r2", p, Block::Minus, std::nullopt}},
                      so_brackets(basis));
}

/// G = H = SU(2), K = {1} acting on C^2 = R^4 with the three left-invariant directions
/// as separate summands ([e1, e2] = 2 e3 and cyclic; unit round S^3 at x = 1).
inline GeometrySpec su2_triaxial() {
  std::vector<BracketEntry> b;
  for (int i = 0; i < 3; ++i) b.push_back({i, (i + 1) % 3, (i + 2) % 3, 2.0});
  return GeometrySpec("su2-triaxial", 3, 0,
                      {{"e1", 1, Block::Plus, std::nullopt},
                       {"e2", 1, Block::Plus, std::nullopt},
                       {"e3", 1, Block::Plus, std::nullopt}},
                      b);
}

struct BuiltinParams {
  std::optional<int> k;
  std::optional<int> n;
  std::optional<int> p;
};

/// Builtin by name. Accepts "bryant-sphere" with params, or the parenthesized forms
/// "bryant-sphere(3)", "gaussian-flat(2)", "sine-cone(2)", "stiefel-so(4)",
/// "stiefel-codim2-so(4)", "grassmann-so(2+3)".
inline GeometrySpec make_builtin(const std::string& name, const BuiltinParams& params = {}) {
  static const std::regex paren(R"(^([a-z0-9\-]+)\((\d+)(?:\+(\d+))?\)$)");
  std::string base = name;
  std::optional<int> a, b;
  std::smatch m;
  if (std::regex_match(name, m, paren)) {
    base = m[1];
    a = std::stoi(m[2]);
    if (m[3].matched) b = std::stoi(m[3]);
  }
  auto need = [&](std::optional<int> v, const char* what) {
    if (!v) throw GeometryError("builtin '" + base + "' needs parameter " + what);
    return *v;
  };
  if (base == "cigar") return cigar();
  if (base == "su2-triaxial") return su2_triaxial();
  if (base == "gaussian-flat") return gaussian_flat(need(a ? a : params.k ? params.k : params.n, "k"));
  if (base == "bryant-sphere") return bryant_sphere(need(a ? a : params.n ? params.n : params.k, "n"));
  if (base == "sine-cone") return sine_cone(need(a ? a : params.n ? params.n : params.k, "n"));
  if (base == "stiefel-so") return stiefel(a ? *a - 2 : need(params.n, "n"));
  if (base == "stiefel-codim2-so") return stiefel_codim2(a ? *a - 2 : need(params.n, "n"));
  if (base == "grassmann-so") {
    if (a && b) return grassmann(*a, *b);
    return grassmann(need(params.p, "p"), need(params.n, "n"));
  }
  throw GeometryError("unknown builtin geometry '" + name + "'");
}

inline std::vector<std::string> builtin_names() {
  return {"gaussian-flat(k)", "bryant-sphere(n)", "cigar",       "sine-cone(n)",
          "stiefel-so(n+2)",  "stiefel-codim2-so(n+2)", "grassmann-so(p+n)", "su2-triaxial"};
}

}  // namespace cohomsol
