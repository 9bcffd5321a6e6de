// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "cohomsol/cohomsol.hpp"

using namespace cohomsol;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0) o.require(secs < limit_s, "runtime");
  std::printf("%s %d %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
  if (!o.pass) ++failures;
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

SeriesSolution jet(const GeometrySpec& spec, double eps, double u2, std::map<int, std::vector<double>> kp = {}) {
  return solve_series(spec, make_initial_data(spec, eps, u2, {}, 12, std::move(kp)));
}

const double tanh_over_t_sq[] = {1, 0, -2.0 / 3, 0, 17.0 / 45, 0, -62.0 / 315, 0, 1382.0 / 14175, 0, -21844.0 / 467775};
const double minus_two_log_cosh[] = {0, 0, -1, 0, 1.0 / 6, 0, -2.0 / 45, 0, 17.0 / 1260, 0, -62.0 / 14175};
const double sin_over_t_sq[] = {1, 0, -1.0 / 3, 0, 2.0 / 45, 0, -1.0 / 315, 0, 2.0 / 14175, 0, -2.0 / 467775};

std::vector<GeometrySpec> builtins() {
  return {gaussian_flat(2), bryant_sphere(3), cigar(),        sine_cone(2),    stiefel(2),
          stiefel(3),       stiefel_codim2(2), stiefel_codim2(3), grassmann(2, 3), su2_triaxial()};
}

double max_series_contact(const GeometrySpec& spec, const SeriesSolution& sol) {
  const auto R = x_equation_residual(spec, sol.x_series(), sol.u_series(), sol.epsilon, sol.order - 2);
  double worst = 0.0;
  for (int e = R.lead(); e <= sol.order - 2; ++e) worst = std::max(worst, R.coeff(e).max_abs());
  const auto Ru = u_equation_residual(spec, sol.x_series(), sol.u_series(), sol.epsilon, sol.order - 2);
  for (int e = Ru.lead(); e <= sol.order - 2; ++e) worst = std::max(worst, std::abs(Ru.coeff(e)));
  return worst;
}

}  // namespace

int main() {
  criterion(1, "Gaussian soliton exactness", 1.0, [](Outcome& o) {
    bool exact = true;
    for (int k = 1; k <= 3; ++k)
      for (double eps : {-2.0, 2.0}) {
        const auto spec = gaussian_flat(k);
        const auto sol = jet(spec, eps, -eps / 2);
        for (std::size_t m = 1; m < sol.x_jet.size(); ++m) exact = exact && sol.x_jet[m].max_abs() == 0.0;
        for (std::size_t m = 0; m < sol.u_jet.size(); ++m) exact = exact && sol.u_jet[m] == (m == 2 ? -eps / 2 : 0.0);
        // For eps < 0 perturbations of udot grow like exp(t^2): report where the 1e-10 band is left.
        double t_end = 10.0, worst = 0.0, left_at = -1.0;
        std::string blowup;
        for (;;) {
          try {
            const auto tr = integrate(spec, sol, 0.05, t_end);
            for (const auto& s : tr.samples) {
              const double dev = (s.state.x - DiagonalTensor::identity(spec.layout())).max_abs();
              worst = std::max(worst, dev);
              if (dev > 1e-10 && left_at < 0) left_at = s.state.t;
            }
            break;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::Numerical) throw;
            if (blowup.empty()) blowup = e.what();
            t_end -= 0.5;
          }
        }
        const std::string tag = "k=" + std::to_string(k) + " eps=" + std::to_string(static_cast<int>(eps));
        o.require(blowup.empty() && worst <= 1e-10, tag + " flat to 1e-10 on [0.05, 10]");
        o.detail << " " << tag << ": max|x-1| " << sci(worst) << " on [0.05, " << t_end << "]";
        if (left_at >= 0) o.detail << ", leaves band at t=" << left_at;
        if (!blowup.empty()) o.detail << ", " << blowup;
      }
    o.require(exact, "jet exactly flat, u = -eps t^2/4");
  });

  criterion(2, "Cigar reproduction", 5.0, [](Outcome& o) {
    const auto spec = cigar();
    const auto sol = jet(spec, 0.0, -2.0);
    const auto X = sol.x_raw();
    const auto U = sol.u_raw();
    double cx = 0.0, cu = 0.0;
    for (int e = 0; e <= 10; ++e) {
      cx = std::max(cx, std::abs(X[e][0] - tanh_over_t_sq[e]));
      cu = std::max(cu, std::abs(U[e] - minus_two_log_cosh[e]));
    }
    o.require(cx <= 1e-9, "x coefficients");
    o.require(cu <= 1e-9, "u coefficients");
    const auto tr = integrate(spec, sol, 0.05, 5.0);
    double dev = 0.0;
    for (const auto& s : tr.samples) {
      const double th = std::tanh(s.state.t) / s.state.t;
      dev = std::max(dev, std::abs(s.state.x[0] - th * th));
    }
    o.require(dev <= 1e-7, "integrated x vs closed form");
    // Residuals on the closed form itself: f = tanh t, u = -2 log cosh t.
    double res = 0.0, fi = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.05 + (5.0 - 0.05) * i / 200.0;
      const double f = std::tanh(t), s2 = 1 - f * f, f1 = s2, f2 = -2 * f * s2;
      const double x = f * f / (t * t), xd = 2 * f * f1 / (t * t) - 2 * f * f / (t * t * t);
      const double xdd = 2 * (f1 * f1 + f * f2) / (t * t) - 8 * f * f1 / (t * t * t) + 6 * f * f / std::pow(t, 4);
      auto c = [&](double v) { return DiagonalTensor(spec.layout(), {v}); };
      const SolitonState st{t, c(x), c(0.5 * xd), -2 * f, -2 * s2};
      const SolitonDerivative d{c(xd), c(0.5 * xdd), -2 * s2, 4 * s2 * f};
      res = std::max(res, soliton_residual(spec, 0.0, st, d).norm());
      fi = std::max(fi, std::abs(first_integral_residual(spec, 0.0, st, d)));
    }
    o.require(res <= 1e-10 && fi <= 1e-10, "closed-form residuals");
    o.detail << " coeff err x " << sci(cx) << " u " << sci(cu) << ", trajectory dev " << sci(dev) << ", residuals "
             << sci(res) << " / " << sci(fi);
  });

  criterion(3, "Einstein specialization (sine cone)", 5.0, [](Outcome& o) {
    for (int n : {2, 3}) {
      const auto spec = bryant_sphere(n);
      const auto sol = jet(spec, -2.0 * n, 0.0);
      bool uzero = true;
      for (double u : sol.u_jet) uzero = uzero && u == 0.0;
      o.require(uzero, "u jet identically 0");
      const auto X = sol.x_raw();
      double cx = 0.0;
      for (int e = 0; e <= 10; ++e) cx = std::max(cx, std::abs(X[e][0] - sin_over_t_sq[e]));
      o.require(cx <= 1e-9, "x coefficients");
      FlowOptions opt;
      opt.stepper.rtol = 1e-11;
      opt.stepper.atol = 1e-14;
      const auto tr = integrate(spec, sol, 0.05, 4.0, opt);
      o.require(tr.degenerate && std::abs(tr.degeneration_time - M_PI) <= 1e-3, "degeneration at pi +- 1e-3");
      o.detail << " n=" << n << ": coeff err " << sci(cx) << ", degeneration t - pi = "
               << sci(tr.degeneration_time - M_PI);
    }
  });

  criterion(4, "Bryant-type steady soliton", 30.0, [](Outcome& o) {
    const auto spec = bryant_sphere(3);
    for (double u2 : {-0.5, -1.0}) {
      const auto data = make_initial_data(spec, 0.0, u2);
      o.require(check_initial_conditions(spec, data).passed(), "initial conditions");
      const auto sol = solve_series(spec, data);
      double cons = 0.0;
      for (double r : sol.x_consistency) cons = std::max(cons, r);
      for (double r : sol.u_consistency) cons = std::max(cons, r);
      o.require(cons <= 1e-8, "consistency residuals");
      bool odd = true;
      for (std::size_t m = 1; m < sol.u_jet.size(); m += 2) odd = odd && sol.u_jet[m] == 0.0;
      o.require(odd, "odd u coefficients vanish");
      const auto tr = integrate(spec, sol, 0.05, 10.0);
      const double fi = tr.max_first_integral();
      o.require(fi <= 1e-6, "first integral <= 1e-6");
      FlowOptions half;
      half.stepper.rtol = 0.5 * half.stepper.rtol;
      half.stepper.atol = 0.5 * half.stepper.atol;
      const double fi_half = integrate(spec, sol, 0.05, 10.0, half).max_first_integral();
      o.require(fi / fi_half >= 8.0, "halving tolerances reduces residual >= 8x");
      // For comparison: halving a fixed step, where the nominal order shows.
      double fixed[2];
      for (int i = 0; i < 2; ++i) {
        FlowOptions f;
        f.stepper.fixed_step = i == 0 ? 0.01 : 0.005;
        fixed[i] = integrate(spec, sol, 0.05, 10.0, f).max_first_integral();
      }
      o.detail << " u2=" << u2 << ": FI " << sci(fi) << ", tolerance-halving ratio " << sci(fi / fi_half)
               << " (fixed-step halving ratio " << sci(fixed[0] / fixed[1]) << ")";
    }
  });

  criterion(5, "Operator formula cross-validation", 0, [](Outcome& o) {
    double worst = 0.0;
    for (const auto& spec : builtins())
      for (int m = 0; m <= 6; ++m)
        worst = std::max(worst, (build_Lm(spec, m).matrix - build_Lm_from_definition(spec, m).matrix).cwiseAbs().maxCoeff());
    o.require(worst <= 1e-6, "L_m closed form vs finite differences");
    bool exact = true, positive = true;
    for (int k = 1; k <= 50; ++k)
      for (int m = 0; m <= 100; ++m) {
        const double v = build_Ltilde(k, m);
        exact = exact && v == (m + 1.0) - static_cast<double>(k) / (m + 2) + k;
        positive = positive && v > 0.0;
      }
    o.require(exact, "Ltilde formula");
    o.require(positive, "Ltilde > 0");
    o.detail << " max |L_closed - L_fd| = " << sci(worst);
  });

  criterion(6, "(d r_sing) identities", 0, [](Outcome& o) {
    double plus_dev = 0.0, minus_dev = 0.0, scalar_form_dev = 0.0;
    for (const auto& spec : builtins()) {
      const auto L = spec.layout();
      const auto I = DiagonalTensor::identity(L);
      const auto minus = spec.summands_in(Block::Minus);
      Eigen::MatrixXd C;
      std::vector<double> lambda;
      if (!minus.empty()) {
        C = casimir_tensor_operator(spec);
        lambda = casimir_spectrum(spec);
      }
      const double k = spec.k();
      for (std::size_t j = 0; j < spec.num_summands(); ++j) {
        const auto xi = DiagonalTensor::unit(L, j);
        const double h = 1e-5;
        const auto d = (singular_ricci(spec, I + xi * h) - singular_ricci(spec, I - xi * h)) * (0.5 / h);
        for (std::size_t i = 0; i < spec.num_summands(); ++i) {
          if (spec.summand(i).block == Block::Plus) {
            plus_dev = std::max(plus_dev, std::abs(d[i] - ((k + 1) * xi[i] - 2.0 * xi.plus_part().trace())));
            continue;
          }
          const auto a = std::find(minus.begin(), minus.end(), static_cast<int>(i)) - minus.begin();
          double want = 0.0, scalar = 0.0;
          if (spec.summand(j).block == Block::Minus) {
            const auto b = std::find(minus.begin(), minus.end(), static_cast<int>(j)) - minus.begin();
            want = 0.5 * C(a, b);
            scalar = i == j ? 0.5 * lambda[static_cast<std::size_t>(a)] : 0.0;
          }
          minus_dev = std::max(minus_dev, std::abs(d[i] - want));
          scalar_form_dev = std::max(scalar_form_dev, std::abs(d[i] - scalar));
        }
      }
    }
    o.require(plus_dev <= 1e-6, "Plus identity");
    o.require(minus_dev <= 1e-6, "Minus identity (Casimir on End(p_minus))");
    o.detail << " Plus dev " << sci(plus_dev) << ", Minus dev " << sci(minus_dev)
             << " (per-summand vector-Casimir scalar form would deviate by " << sci(scalar_form_dev) << ")";
  });

  criterion(7, "Indeterminacy fixtures", 3.0, [](Outcome& o) {
    struct Fixture {
      GeometrySpec spec;
      int plus, minus;  // -1: only the total is prescribed
      int total;
    };
    const Fixture fixtures[] = {{stiefel(2), 1, 0, 1}, {stiefel_codim2(2), 1, 1, 2}, {grassmann(2, 3), -1, -1, 2}};
    for (const auto& f : fixtures) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto rep = kernel_scan(f.spec);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.require(secs < 1.0, f.spec.name() + " runtime");
      const bool split = f.plus < 0 || (rep.plus_total() == f.plus && rep.minus_total() == f.minus);
      const bool ok = rep.stabilized && rep.plus_total() + rep.minus_total() == f.total && split;
      std::string want = "total " + std::to_string(f.total);
      if (f.plus >= 0) want += " (plus " + std::to_string(f.plus) + ", minus " + std::to_string(f.minus) + ")";
      o.require(ok, f.spec.name() + " expects " + want);
      o.detail << " " << f.spec.name() << ": plus " << rep.plus_total() << " minus " << rep.minus_total();
    }
  });

  criterion(8, "Kernel-injection effect", 0, [](Outcome& o) {
    const auto spec = stiefel(2);
    const auto basis = kernel_basis(spec, 0);
    bool plus_only = false;
    for (const auto& v : basis) plus_only = plus_only || v.minus_part().max_abs() <= 1e-9;
    o.require(plus_only, "an m = 0 kernel vector supported on the collapsing block");
    if (basis.empty()) return;
    // The injection experiment on the m = 0 kernel that does exist.
    const double c = 0.5;
    const auto a = jet(spec, 0.0, -1.0);
    const auto b = jet(spec, 0.0, -1.0, {{0, {c}}});
    const double diff = (b.x_jet[2] - a.x_jet[2] - basis[0] * c).max_abs();
    double below = 0.0;
    for (std::size_t m = 0; m < 2; ++m) below = std::max(below, (b.x_jet[m] - a.x_jet[m]).max_abs());
    const double contact = std::max(max_series_contact(spec, a), max_series_contact(spec, b));
    double cons = 0.0;
    for (const auto* s : {&a, &b})
      for (double r : s->x_consistency) cons = std::max(cons, r);
    const bool effect = diff <= 1e-12 && below == 0.0 && contact <= 1e-9 && cons <= 1e-8;
    o.require(effect, "injection effect and certificates");
    o.detail << " m=0 kernel vector on {";
    for (std::size_t i = 0; i < basis[0].size(); ++i)
      if (std::abs(basis[0][i]) > 1e-9) o.detail << " " << spec.summand(i).label;
    o.detail << " }; x_2 difference minus injected vector " << sci(diff) << ", contact " << sci(contact)
             << ", consistency " << sci(cons);
  });

  // Collapsing-block injection where such a kernel exists (not a criterion line).
  {
    const auto spec = su2_triaxial();
    const auto basis = kernel_basis(spec, 0);
    const auto a = jet(spec, 0.0, -1.0);
    const auto b = jet(spec, 0.0, -1.0, {{0, {0.3, -0.2}}});
    const double diff = (b.x_jet[2] - a.x_jet[2] - basis[0] * 0.3 - basis[1] * -0.2).max_abs();
    std::printf("INFO su2-triaxial: %zu-dim m=0 kernel on the collapsing block, injection x_2 error %s, contact %s\n",
                basis.size(), sci(diff).c_str(), sci(max_series_contact(spec, b)).c_str());
  }

  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
