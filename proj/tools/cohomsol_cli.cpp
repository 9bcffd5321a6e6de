// cohomsol: series / integrate / indeterminacy / verify front end.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cohomsol/cohomsol.hpp"

namespace fs = std::filesystem;
using namespace cohomsol;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation:
      return 2;
    case ErrorKind::Certificate:
      return 3;
    case ErrorKind::Numerical:
      return 4;
  }
  return 4;
}

struct CliFlags {
  std::string geometry;
  std::optional<int> k, n, p;
  std::optional<double> epsilon, u2, t0, t_end, rtol, atol;
  std::vector<std::string> L1, kernel;
  std::optional<int> order, scan_limit;
  std::optional<std::string> out;
  std::vector<std::string> configs;
  int jobs = 1;
  bool plot = false;
};

/// Command-line values override the configuration file.
RunConfig overlay(RunConfig cfg, const CliFlags& f) {
  if (!f.geometry.empty()) {
    cfg.geometry_ref = f.geometry;
    cfg.inline_geometry.reset();
  }
  if (f.k) cfg.params.k = f.k;
  if (f.n) cfg.params.n = f.n;
  if (f.p) cfg.params.p = f.p;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.u2) cfg.u2 = *f.u2;
  if (f.t0) cfg.t0 = f.t0;
  if (f.t_end) cfg.t_end = *f.t_end;
  if (f.rtol) cfg.rtol = *f.rtol;
  if (f.atol) cfg.atol = *f.atol;
  if (f.order) cfg.series_order = *f.order;
  if (f.scan_limit) cfg.scan_limit = *f.scan_limit;
  if (f.out) cfg.outputs = *f.out;
  if (f.plot) cfg.emit_plot_data = true;
  if (!f.L1.empty()) {
    cfg.L1.clear();
    for (const auto& s : f.L1) cfg.L1.insert(parse_label_value(s));
  }
  if (!f.kernel.empty()) {
    cfg.kernel_params.clear();
    for (const auto& s : f.kernel) cfg.kernel_params.insert(parse_kernel_param(s));
  }
  return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& file) {
  fs::create_directories(cfg.outputs);
  std::ofstream os(fs::path(cfg.outputs) / file);
  if (!os) throw InvalidInitialData("cannot write '" + (fs::path(cfg.outputs) / file).string() + "'");
  return os;
}

InitialData initial_data(const GeometrySpec& spec, const RunConfig& cfg) {
  return make_initial_data(spec, cfg.epsilon, cfg.u2, cfg.L1, cfg.series_order, cfg.kernel_params);
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

FlowOptions flow_options(const RunConfig& cfg) {
  FlowOptions o;
  o.stepper.rtol = cfg.rtol;
  o.stepper.atol = cfg.atol;
  return o;
}

/// Max |x - x_closed| over the trajectory, when the run reproduces a closed form.
std::optional<double> closed_form_deviation(const GeometrySpec& spec, const RunConfig& cfg, const Trajectory& tr) {
  const auto cf = closed_form_for(spec, cfg.epsilon);
  if (!cf || std::abs(cf->epsilon - cfg.epsilon) > 1e-14 || std::abs(cf->u2 - cfg.u2) > 1e-14 || !cfg.L1.empty())
    return std::nullopt;
  double dev = 0.0;
  for (const auto& s : tr.samples) {
    const auto p = cf->at(s.state.t);
    dev = std::max(dev, (s.state.x - p.state.x).max_abs());
  }
  return dev;
}

int cmd_series(const RunConfig& cfg, std::ostream& log) {
  const auto spec = cfg.geometry();
  const auto sol = solve_series(spec, initial_data(spec, cfg));
  {
    auto os = open_out(cfg, "jet.csv");
    write_jet_csv(os, sol);
  }
  {
    auto os = open_out(cfg, "x_series.csv");
    write_series_csv(os, sol.x_series());
  }
  {
    auto os = open_out(cfg, "kernel_report.csv");
    write_kernel_report(os, spec, sol.order - 2);
  }
  log << "geometry " << spec.name() << '\n'
      << "order " << sol.order << '\n'
      << "max_x_consistency_residual " << max_of(sol.x_consistency) << '\n'
      << "max_u_consistency_residual " << max_of(sol.u_consistency) << '\n'
      << "kernel_injections " << sol.free_param_log.size() << '\n';
  return 0;
}

int cmd_integrate(const RunConfig& cfg, std::ostream& log) {
  const auto spec = cfg.geometry();
  const auto sol = solve_series(spec, initial_data(spec, cfg));
  const auto tr = integrate(spec, sol, cfg.t0, cfg.t_end, flow_options(cfg));
  {
    auto os = open_out(cfg, "jet.csv");
    write_jet_csv(os, sol);
  }
  {
    auto os = open_out(cfg, "trajectory.csv");
    write_trajectory_csv(os, tr);
  }
  if (cfg.emit_plot_data) {
    auto os = open_out(cfg, "plot_data.csv");
    write_plot_data(os, tr);
  }
  log << "geometry " << spec.name() << '\n'
      << "t0 " << tr.t0 << '\n'
      << "jet_order " << tr.jet_order << '\n'
      << "tail_estimate " << tr.tail_estimate << '\n'
      << "accepted_steps " << tr.stats.accepted << '\n'
      << "rejected_steps " << tr.stats.rejected << '\n'
      << "t_last " << tr.samples.back().state.t << '\n'
      << "max_first_integral_residual " << tr.max_first_integral() << '\n'
      << "max_soliton_residual " << tr.max_soliton_residual() << '\n';
  if (tr.degenerate)
    log << "degeneration_time " << tr.degeneration_time << '\n' << "degenerate_summand " << tr.degenerate_summand << '\n';
  if (const auto dev = closed_form_deviation(spec, cfg, tr)) log << "max_closed_form_deviation " << *dev << '\n';
  return 0;
}

int cmd_indeterminacy(const RunConfig& cfg, std::ostream& log) {
  const auto spec = cfg.geometry();
  const auto rep = kernel_scan(spec, cfg.scan_limit);
  {
    auto os = open_out(cfg, "indeterminacy.csv");
    write_indeterminacy_table(os, rep);
  }
  write_indeterminacy_table(log, rep);
  if (!rep.stabilized) throw StabilizationNotReached("kernel still present at m = " + std::to_string(rep.scan_limit));
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const auto spec = cfg.geometry();
  const auto data = initial_data(spec, cfg);
  struct Line {
    std::string name;
    bool pass;
    std::string value;
  };
  std::vector<Line> lines;
  auto add = [&](const std::string& name, bool pass, double value) {
    std::ostringstream v;
    v.precision(3);
    v << std::scientific << value;
    lines.push_back({name, pass, v.str()});
  };

  if (spec.has_brackets()) {
    for (const auto& c : validate_geometry(spec).checks) add("geometry:" + c.name, c.passed, c.max_deviation);
  }
  for (const auto& c : check_initial_conditions(spec, data).checks) add("initial:" + c.name, c.passed, c.max_deviation);

  std::optional<SeriesSolution> sol;
  try {
    sol = solve_series(spec, data);
    add("series:consistency", true, max_of(sol->x_consistency));
    add("series:u_parity", true, 0.0);
    const auto R = x_equation_residual(spec, sol->x_series(), sol->u_series(), data.epsilon, sol->order - 2);
    double contact = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) contact = std::max(contact, R[i].max_abs());
    add("series:order_of_contact", contact <= 1e-8, contact);
  } catch (const ConsistencyViolated& e) {
    lines.push_back({"series:consistency", false, e.what()});
  } catch (const ParityViolated& e) {
    lines.push_back({"series:u_parity", false, e.what()});
  }

  if (sol) {
    const auto tr = integrate(spec, *sol, cfg.t0, cfg.t_end, flow_options(cfg));
    constexpr double regular = 1e-2;  // residual terms grow like 1/x near a collapse
    add("flow:first_integral", tr.max_first_integral(regular) <= 1e-6, tr.max_first_integral(regular));
    add("flow:soliton_residual", tr.max_soliton_residual(regular) <= 1e-6, tr.max_soliton_residual(regular));
    if (const auto dev = closed_form_deviation(spec, cfg, tr)) add("flow:closed_form_deviation", *dev <= 1e-7, *dev);
  }

  if (const auto cf = closed_form_for(spec, cfg.epsilon)) {
    // The closed form checked against the configured soliton constant.
    double worst = 0.0;
    const double t_hi = std::min(cfg.t_end, 3.0);
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.05 + (t_hi - 0.05) * i / 200.0;
      const auto p = cf->at(t);
      worst = std::max(worst, soliton_residual(spec, cfg.epsilon, p.state, p.deriv).norm());
    }
    add("closed_form:soliton_residual", worst <= 1e-8, worst);
  }

  bool all = true;
  for (const auto& l : lines) {
    log << (l.pass ? "PASS " : "FAIL ") << l.name << ' ' << l.value << '\n';
    all = all && l.pass;
  }
  log << (all ? "VERIFIED" : "NOT VERIFIED") << '\n';
  {
    auto os = open_out(cfg, "certificate.csv");
    os << "check,status,value\n";
    for (const auto& l : lines) os << l.name << ',' << (l.pass ? "pass" : "fail") << ",\"" << l.value << "\"\n";
  }
  return all ? 0 : 3;
}

int run_one(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  try {
    if (command == "series") return cmd_series(cfg, log);
    if (command == "integrate") return cmd_integrate(cfg, log);
    if (command == "indeterminacy") return cmd_indeterminacy(cfg, log);
    return cmd_verify(cfg, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomogeneity-one gradient Ricci solitons near a singular orbit"};
  app.require_subcommand(1, 1);
  CliFlags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--geometry", f.geometry, "builtin name (e.g. bryant-sphere(3), stiefel-so(5)) or geometry JSON");
    sub->add_option("--k", f.k, "sphere dimension for gaussian-flat");
    sub->add_option("--n", f.n, "parameter n for bryant-sphere, sine-cone, stiefel-so, grassmann-so");
    sub->add_option("--p", f.p, "parameter p for grassmann-so");
    sub->add_option("--epsilon", f.epsilon, "soliton constant");
    sub->add_option("--u2", f.u2, "u''(0)");
    sub->add_option("--L1", f.L1, "shape operator entry label=value (repeatable)");
    sub->add_option("--kernel", f.kernel, "kernel injection m:c1,c2,... (repeatable)");
    sub->add_option("--order", f.order, "series truncation order (default 12)");
    sub->add_option("--t0", f.t0, "handoff time (default: chosen from the jet tail)");
    sub->add_option("--t-end", f.t_end, "final time (default 10)");
    sub->add_option("--rtol", f.rtol, "relative tolerance (default 1e-9)");
    sub->add_option("--atol", f.atol, "absolute tolerance (default 1e-12)");
    sub->add_option("--scan-limit", f.scan_limit, "largest order scanned for kernels (default 50)");
    sub->add_option("--out", f.out, "output directory (default .)");
    sub->add_option("--config", f.configs, "run configuration JSON (repeatable; one run each)");
    sub->add_option("--jobs", f.jobs, "concurrent runs when several configs are given")->check(CLI::PositiveNumber);
    sub->add_flag("--emit-plot-data", f.plot, "write plot_data.csv (t, f_i)");
  };
  std::vector<CLI::App*> subs{
      app.add_subcommand("series", "solve the formal power series and write the jet"),
      app.add_subcommand("integrate", "continue the series numerically and write the trajectory"),
      app.add_subcommand("indeterminacy", "scan kernel dimensions of the recursion operators"),
      app.add_subcommand("verify", "run all certificates and report pass/fail"),
  };
  for (auto* s : subs) add_common(s);
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::vector<RunConfig> runs;
  try {
    if (f.configs.empty()) {
      if (f.geometry.empty()) {
        std::cerr << "error: --geometry or --config is required\n";
        return 2;
      }
      runs.push_back(overlay(RunConfig{}, f));
    } else {
      for (const auto& path : f.configs) {
        RunConfig cfg = overlay(load_run_config(path), f);
        if (f.configs.size() > 1) cfg.outputs = (fs::path(cfg.outputs) / fs::path(path).stem()).string();
        runs.push_back(cfg);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }

  std::vector<std::string> logs(runs.size());
  std::vector<int> codes(runs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < runs.size();) {
      std::ostringstream log;
      log.precision(10);
      codes[i] = run_one(command, runs[i], log);
      logs[i] = log.str();
    }
  };
  const int nthreads = std::max(1, std::min<int>(f.jobs, static_cast<int>(runs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs.size() > 1) std::cout << "== " << (f.configs.empty() ? "run" : f.configs[i]) << '\n';
    std::cout << logs[i];
    code = std::max(code, codes[i]);
  }
  return code;
}
